"""Continuous and discrete chaotic sources used as power-transfer waveforms.

The continuous source is a Lorenz-type system with per-axis dynamic-range
scaling: for scaling factors (eps_x, eps_y, eps_z) the state (x, y, z) evolves
as

    dx/dt = sigma * ((eps_y/eps_x) * y - x)
    dy/dt = (eps_x/eps_y) * x * (r - eps_z * z) - y
    dz/dt = (eps_x*eps_y/eps_z) * x * y - beta * z

which is the classical system observed through the change of variables
x -> x/eps_x, y -> y/eps_y, z -> z/eps_z.  The discrete source is the Henon
map x' = y + 1 - gamma*x^2, y' = delta*x.

Integration is fixed-step classical fourth-order Runge-Kutta so that runs are
bit-reproducible for a given (initial point, dt, horizon).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DivergenceError

DEFAULT_DT = 1e-3
DEFAULT_DIVERGENCE_BOUND = 1e6
DEFAULT_TRANSIENT_FRACTION = 0.5


@dataclass(frozen=True)
class LorenzParams:
    """Parameters of the continuous source."""

    sigma: float = 10.0
    r: float = 12.0
    beta: float = 8.0 / 3.0

    def __post_init__(self):
        if not (self.sigma > 0 and self.beta > 0 and self.r > 0):
            raise ValueError("sigma, r, beta must all be positive")


@dataclass(frozen=True)
class HenonParams:
    """Parameters of the discrete source."""

    gamma: float = 0.2
    delta: float = 0.1

    def __post_init__(self):
        if self.gamma == 0.0:
            raise ValueError("gamma must be nonzero")


@dataclass(frozen=True)
class ScalingFactors:
    """Per-axis dynamic-range compression factors, each >= 1."""

    eps_x: float = 1.0
    eps_y: float = 1.0
    eps_z: float = 1.0

    def __post_init__(self):
        if min(self.eps_x, self.eps_y, self.eps_z) < 1.0:
            raise ValueError("scaling factors must be >= 1")


UNIT_SCALING = ScalingFactors(1.0, 1.0, 1.0)


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled orbit.

    ``samples`` has one row per time step and one column per state component
    (three for the flow, two for the map).  ``dt`` is the sampling step (1.0
    for maps).  ``transient_cutoff`` is the first row index considered part of
    the steady regime; statistics that assume stationarity should start there.
    """

    dt: float
    samples: np.ndarray
    transient_cutoff: int

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.samples.shape[0]) * self.dt

    @property
    def steady_samples(self) -> np.ndarray:
        return self.samples[self.transient_cutoff:]


def transient_cutoff_index(n_samples: int, fraction: float = DEFAULT_TRANSIENT_FRACTION) -> int:
    """Row index where the steady-statistics window starts."""
    if not 0.0 <= fraction < 1.0:
        raise ValueError("transient fraction must be in [0, 1)")
    return int(fraction * n_samples)


def steps_for_horizon(horizon: float, dt: float) -> int:
    """Number of integration steps covering ``horizon`` time units."""
    if dt <= 0 or horizon <= 0:
        raise ValueError("dt and horizon must be positive")
    return int(math.floor(horizon / dt + 1e-9))


def rate_constants(params: LorenzParams, scaling: ScalingFactors) -> tuple:
    """Precomputed coefficient tuple consumed by lorenz_rates / rk4_step."""
    return (
        params.sigma,
        params.r,
        params.beta,
        scaling.eps_y / scaling.eps_x,
        scaling.eps_x / scaling.eps_y,
        scaling.eps_z,
        scaling.eps_x * scaling.eps_y / scaling.eps_z,
    )


def lorenz_rates(x, y, z, consts):
    """Right-hand side of the scaled flow; works on scalars or arrays alike."""
    sigma, r, beta, ryx, rxy, ez, rxyz = consts
    dx = sigma * (ryx * y - x)
    dy = rxy * x * (r - ez * z) - y
    dz = rxyz * x * y - beta * z
    return dx, dy, dz


def rk4_step(x, y, z, dt, consts):
    """One classical Runge-Kutta step; scalar and array components share this path."""
    h = 0.5 * dt
    k1x, k1y, k1z = lorenz_rates(x, y, z, consts)
    k2x, k2y, k2z = lorenz_rates(x + h * k1x, y + h * k1y, z + h * k1z, consts)
    k3x, k3y, k3z = lorenz_rates(x + h * k2x, y + h * k2y, z + h * k2z, consts)
    k4x, k4y, k4z = lorenz_rates(x + dt * k3x, y + dt * k3y, z + dt * k3z, consts)
    w = dt / 6.0
    return (
        x + w * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        y + w * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
        z + w * (k1z + 2.0 * k2z + 2.0 * k3z + k4z),
    )


def lorenz_derivative(
    state: Sequence[float],
    params: LorenzParams,
    scaling: ScalingFactors = UNIT_SCALING,
) -> np.ndarray:
    """Instantaneous rates (dx/dt, dy/dt, dz/dt) at ``state``."""
    x, y, z = state
    return np.array(lorenz_rates(x, y, z, rate_constants(params, scaling)), dtype=float)


def scale_state(state: Sequence[float], scaling: ScalingFactors) -> np.ndarray:
    """Map an unscaled state into compressed coordinates (componentwise division)."""
    x, y, z = state
    return np.array([x / scaling.eps_x, y / scaling.eps_y, z / scaling.eps_z])


def unscale_state(state: Sequence[float], scaling: ScalingFactors) -> np.ndarray:
    """Inverse of :func:`scale_state`."""
    x, y, z = state
    return np.array([x * scaling.eps_x, y * scaling.eps_y, z * scaling.eps_z])


def integrate_lorenz(
    initial: Sequence[float],
    params: LorenzParams,
    scaling: ScalingFactors = UNIT_SCALING,
    dt: float = DEFAULT_DT,
    horizon: float = 50.0,
    *,
    divergence_bound: float = DEFAULT_DIVERGENCE_BOUND,
    transient_fraction: float = DEFAULT_TRANSIENT_FRACTION,
) -> Trajectory:
    """Integrate the scaled flow with fixed-step RK4.

    Args:
        initial: starting state (x, y, z) in scaled coordinates.
        params: system parameters.
        scaling: per-axis compression factors.
        dt: step size.
        horizon: total integration time; floor(horizon/dt) steps are taken.
        divergence_bound: raise DivergenceError as soon as any component
            exceeds this magnitude or becomes non-finite.
        transient_fraction: fraction of samples marked as transient.

    Returns:
        Trajectory with floor(horizon/dt) + 1 rows including the initial state.
    """
    consts = rate_constants(params, scaling)
    n_steps = steps_for_horizon(horizon, dt)
    out = np.empty((n_steps + 1, 3))
    x, y, z = (float(v) for v in initial)
    out[0] = (x, y, z)
    b = divergence_bound
    for k in range(1, n_steps + 1):
        x, y, z = rk4_step(x, y, z, dt, consts)
        # NaN fails every comparison, so this also catches non-finite states.
        if not (abs(x) <= b and abs(y) <= b and abs(z) <= b):
            raise DivergenceError(
                f"state magnitude exceeded {b:g} at t={k * dt:g}", step=k
            )
        out[k] = (x, y, z)
    return Trajectory(dt, out, transient_cutoff_index(n_steps + 1, transient_fraction))


def henon_step(state: Sequence[float], params: HenonParams) -> tuple[float, float]:
    """One application of the map."""
    x, y = state
    return y + 1.0 - params.gamma * x * x, params.delta * x


def iterate_henon(
    initial: Sequence[float],
    params: HenonParams,
    n_steps: int = 100,
    *,
    divergence_bound: float = DEFAULT_DIVERGENCE_BOUND,
    transient_fraction: float = DEFAULT_TRANSIENT_FRACTION,
) -> Trajectory:
    """Iterate the map ``n_steps`` times; returns a Trajectory with dt = 1."""
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    out = np.empty((n_steps + 1, 2))
    x, y = (float(v) for v in initial)
    out[0] = (x, y)
    b = divergence_bound
    for k in range(1, n_steps + 1):
        x, y = y + 1.0 - params.gamma * x * x, params.delta * x
        if not (abs(x) <= b and abs(y) <= b):
            raise DivergenceError(f"state magnitude exceeded {b:g} at step {k}", step=k)
        out[k] = (x, y)
    return Trajectory(1.0, out, transient_cutoff_index(n_steps + 1, transient_fraction))
