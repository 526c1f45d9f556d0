"""Equilibria and analytic stability certificates for both waveform sources.

For the flow, stability of the symmetric equilibrium pair is decided from the
characteristic polynomial lambda^3 + a2*lambda^2 + a1*lambda + a0 via the
Hurwitz determinant test: all three leading principal minors of

    [[a2, a0, 0],
     [ 1, a1, 0],
     [ 0, a2, a0]]

positive.  The coefficients (and therefore the verdict) do not depend on the
dynamic-range scaling factors: scaling is a similarity transform of the
Jacobian at the corresponding equilibrium.

For the map, the attracting fixed point exists and is stable exactly when
0 < delta < 1 and gamma lies in (-(1-delta)^2/4, 3*(1-delta)^2/4), gamma != 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dynamics import HenonParams, LorenzParams, ScalingFactors, UNIT_SCALING
from .errors import ComplexFixedPointError, UndefinedIntervalError


@dataclass(frozen=True)
class EquilibriumSet:
    """Origin plus, when it exists (r > 1), the symmetric nontrivial pair."""

    origin: np.ndarray
    pair: tuple[np.ndarray, np.ndarray] | None

    @property
    def exists_nontrivial(self) -> bool:
        return self.pair is not None

    @property
    def points(self) -> list[np.ndarray]:
        return [self.origin] if self.pair is None else [self.origin, *self.pair]


@dataclass(frozen=True)
class CharPoly:
    """Monic cubic lambda^3 + a2*lambda^2 + a1*lambda + a0."""

    a2: float
    a1: float
    a0: float

    def coefficients(self) -> np.ndarray:
        return np.array([1.0, self.a2, self.a1, self.a0])

    def roots(self) -> np.ndarray:
        return np.roots(self.coefficients())


@dataclass(frozen=True)
class StabilityVerdict:
    """Outcome of a stability test.

    ``minors`` holds the three Hurwitz minors for the flow (None for the map).
    ``stable_interval`` is the open interval of the decisive parameter on which
    the verdict is positive: the r-interval for the flow (None when
    sigma <= beta + 1, where no closed-form interval exists), the gamma-interval
    for the map (None when delta is outside (0, 1)).
    """

    stable: bool
    minors: tuple[float, float, float] | None = None
    stable_interval: tuple[float, float] | None = None


def lorenz_equilibria(params: LorenzParams, scaling: ScalingFactors = UNIT_SCALING) -> EquilibriumSet:
    """All equilibria of the scaled flow, in scaled coordinates."""
    origin = np.zeros(3)
    if params.r <= 1.0:
        return EquilibriumSet(origin, None)
    amp = math.sqrt(params.beta * (params.r - 1.0))
    p1 = np.array([amp / scaling.eps_x, amp / scaling.eps_y, (params.r - 1.0) / scaling.eps_z])
    p2 = np.array([-p1[0], -p1[1], p1[2]])
    return EquilibriumSet(origin, (p1, p2))


def lorenz_jacobian(
    state: Sequence[float],
    params: LorenzParams,
    scaling: ScalingFactors = UNIT_SCALING,
) -> np.ndarray:
    """Jacobian of the scaled vector field at ``state``."""
    x, y, z = state
    ex, ey, ez = scaling.eps_x, scaling.eps_y, scaling.eps_z
    return np.array(
        [
            [-params.sigma, (ey / ex) * params.sigma, 0.0],
            [(ex / ey) * (params.r - ez * z), -1.0, -(ex * ez / ey) * x],
            [(ex * ey / ez) * y, (ex * ey / ez) * x, -params.beta],
        ]
    )


def characteristic_poly(params: LorenzParams) -> CharPoly:
    """Characteristic polynomial of the Jacobian at either nontrivial equilibrium.

    The coefficients are free of the scaling factors.  Only meaningful when the
    nontrivial pair exists (r > 1); the formula itself is defined for any r.
    """
    return CharPoly(
        a2=params.sigma + params.beta + 1.0,
        a1=params.beta * (params.sigma + params.r),
        a0=2.0 * params.sigma * params.beta * (params.r - 1.0),
    )


def hurwitz_matrix(poly: CharPoly) -> np.ndarray:
    return np.array(
        [
            [poly.a2, poly.a0, 0.0],
            [1.0, poly.a1, 0.0],
            [0.0, poly.a2, poly.a0],
        ]
    )


def hurwitz_minors(poly: CharPoly) -> tuple[float, float, float]:
    """Leading principal minors (d1, d2, d3) of the Hurwitz matrix."""
    d1 = poly.a2
    d2 = poly.a2 * poly.a1 - poly.a0
    d3 = d2 * poly.a0
    return d1, d2, d3


def hurwitz_stable(params: LorenzParams) -> StabilityVerdict:
    """Stability certificate for the nontrivial equilibrium pair.

    The verdict is positive exactly when all three Hurwitz minors are positive;
    this matches the sign of the eigenvalue real parts for every positive
    (sigma, beta) regardless of whether the closed-form r-interval exists.
    """
    minors = hurwitz_minors(characteristic_poly(params))
    interval = None
    if params.sigma > params.beta + 1.0:
        interval = (1.0, _r_bound(params))
    return StabilityVerdict(
        stable=all(d > 0.0 for d in minors),
        minors=minors,
        stable_interval=interval,
    )


def _r_bound(params: LorenzParams) -> float:
    return params.sigma * (params.sigma + params.beta + 3.0) / (params.sigma - params.beta - 1.0)


def r_upper_bound(params: LorenzParams) -> float:
    """Supremum of the stable r-interval; requires sigma > beta + 1."""
    if params.sigma <= params.beta + 1.0:
        raise UndefinedIntervalError(
            f"no finite stability bound for sigma={params.sigma:g} <= beta+1={params.beta + 1.0:g}"
        )
    return _r_bound(params)


def henon_fixed_point(params: HenonParams) -> np.ndarray:
    """Principal fixed point (positive square-root branch) of the map."""
    disc = (1.0 - params.delta) ** 2 + 4.0 * params.gamma
    if disc < 0.0:
        raise ComplexFixedPointError(
            f"discriminant {disc:g} < 0: no real fixed point for "
            f"gamma={params.gamma:g}, delta={params.delta:g}"
        )
    x = (params.delta - 1.0 + math.sqrt(disc)) / (2.0 * params.gamma)
    return np.array([x, params.delta * x])


def henon_jacobian(state: Sequence[float], params: HenonParams) -> np.ndarray:
    x, _ = state
    return np.array([[-2.0 * params.gamma * x, 1.0], [params.delta, 0.0]])


def henon_gamma_interval(delta: float) -> tuple[float, float]:
    """Open gamma-interval on which the principal fixed point attracts."""
    if not 0.0 < delta < 1.0:
        raise UndefinedIntervalError(f"stable gamma interval requires 0 < delta < 1, got {delta:g}")
    u = (1.0 - delta) ** 2
    return (-0.25 * u, 0.75 * u)


def henon_stable(params: HenonParams) -> StabilityVerdict:
    """Stability certificate for the map's principal fixed point."""
    if not 0.0 < params.delta < 1.0:
        return StabilityVerdict(stable=False)
    lo, hi = henon_gamma_interval(params.delta)
    return StabilityVerdict(
        stable=lo < params.gamma < hi,
        stable_interval=(lo, hi),
    )
