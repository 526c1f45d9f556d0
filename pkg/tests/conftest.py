import pytest

from chaoswpt.dynamics import LorenzParams, ScalingFactors
from chaoswpt.harvest import LinkBudget, RectennaParams, coefficients


@pytest.fixture(scope="session")
def std_params():
    """Reference operating point used throughout: sigma=10, r=12, beta=8/3."""
    return LorenzParams(sigma=10.0, r=12.0, beta=8.0 / 3.0)


@pytest.fixture(scope="session")
def eps6():
    return ScalingFactors(6.0, 6.0, 6.0)


@pytest.fixture(scope="session")
def std_coeff():
    """Coefficients for the default link budget (30 dBm, 20 m, alpha=4)."""
    return coefficients(LinkBudget(), RectennaParams())
