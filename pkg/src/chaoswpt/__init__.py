"""Chaotic-waveform wireless power transfer: simulation and analysis toolkit.

The package covers the full pipeline: chaotic sources (a scaled Lorenz-type
flow and the Henon map), analytic stability certificates for their settling
regimes, closed-form harvested-DC predictions for a polynomial rectenna model,
Monte Carlo ensembles validating those predictions, and a config-driven CLI
that reproduces the standard experiment set.
"""

from .dynamics import (
    HenonParams,
    LorenzParams,
    ScalingFactors,
    Trajectory,
    UNIT_SCALING,
    henon_step,
    integrate_lorenz,
    iterate_henon,
    lorenz_derivative,
    scale_state,
    unscale_state,
)
from .errors import (
    ChaosWptError,
    ComplexFixedPointError,
    ConfigError,
    DegenerateSignalError,
    DivergenceError,
    InvalidSweepError,
    MomentInconsistencyError,
    SaturationWarning,
    UndefinedIntervalError,
    UnstableRegimeError,
)
from .harvest import (
    FadingMoments,
    HarvestCoefficients,
    HarvestReport,
    LinkBudget,
    NO_FADING,
    RectennaParams,
    coefficients,
    dc_from_moments,
    eta_henon,
    eta_ideal_lorenz,
    eta_scaled_lorenz,
    lorenz_beats_henon,
    lorenz_steady_moments,
    multisine_moments,
    multisine_waveform,
    papr,
    waveform_papr_db,
    with_fading,
)
from .montecarlo import (
    EnsembleConfig,
    EnsembleResult,
    SweepSpec,
    SystemConfig,
    detect_steady_state,
    initial_points,
    multisine_result,
    run_ensemble,
    sweep,
    with_link,
)
from .stability import (
    CharPoly,
    EquilibriumSet,
    StabilityVerdict,
    characteristic_poly,
    henon_fixed_point,
    henon_gamma_interval,
    henon_jacobian,
    henon_stable,
    hurwitz_matrix,
    hurwitz_minors,
    hurwitz_stable,
    lorenz_equilibria,
    lorenz_jacobian,
    r_upper_bound,
)

__version__ = "0.1.0"
