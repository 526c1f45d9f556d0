"""Monte Carlo ensembles validating the closed-form DC predictions.

Realizations differ only in their initial point.  Initial points are drawn
from per-realization counter-based RNG streams (Philox keyed by the seed,
jumped by the realization index), so realization i's draw depends only on
(seed, i): results are reproducible and independent of batch sizes or
evaluation order.

All realizations of an ensemble are integrated together as numpy component
arrays, stepping through exactly the same arithmetic as the scalar
integrators, while second/fourth moments and peak power accumulate in a
streaming fashion (full trajectories are never stored).  A strided subsample
of each realization is kept so settling times can be measured with
:func:`detect_steady_state`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import (
    DEFAULT_DIVERGENCE_BOUND,
    HenonParams,
    LorenzParams,
    ScalingFactors,
    Trajectory,
    UNIT_SCALING,
    henon_step,
    rate_constants,
    rk4_step,
    steps_for_horizon,
    transient_cutoff_index,
)
from .errors import InvalidSweepError
from .harvest import (
    FadingMoments,
    HarvestReport,
    LinkBudget,
    NO_FADING,
    RectennaParams,
    coefficients,
    dc_from_moments,
    eta_henon,
    eta_scaled_lorenz,
    multisine_moments,
    multisine_waveform,
    waveform_papr_db,
    with_fading,
)
from .stability import henon_stable, hurwitz_stable

#: default initial-point boxes, one (low, high) pair per state component
LORENZ_INIT_BOX = ((-20.0, 20.0), (-20.0, 20.0), (0.0, 40.0))
HENON_INIT_BOX = ((-0.5, 0.5), (-0.5, 0.5))

#: target spacing (in time units) of the subsampled settling-detection buffer
_DETECTION_SPACING = 0.1

#: realizations integrated per batch; bounds the detection-buffer memory
_CHUNK = 2048


@dataclass(frozen=True)
class EnsembleConfig:
    """Size, seeding, and windowing of one Monte Carlo ensemble."""

    n_realizations: int = 1000
    seed: int = 1
    init_box: tuple[tuple[float, float], ...] | None = None
    dt: float = 1e-3
    horizon: float = 100.0
    steady_state_tol: float = 1e-3
    transient_fraction: float = 0.5

    def __post_init__(self):
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.dt <= 0 or self.horizon <= 0:
            raise ValueError("dt and horizon must be positive")
        if self.steady_state_tol <= 0:
            raise ValueError("steady_state_tol must be positive")
        if not 0.0 <= self.transient_fraction < 1.0:
            raise ValueError("transient_fraction must be in [0, 1)")
        if self.init_box is not None:
            for lo, hi in self.init_box:
                if not lo <= hi:
                    raise ValueError(f"init_box bounds out of order: ({lo:g}, {hi:g})")


@dataclass(frozen=True)
class SystemConfig:
    """Everything one operating point needs: source, channel, and ensemble."""

    system: str = "lorenz"
    lorenz: LorenzParams = LorenzParams()
    henon: HenonParams = HenonParams()
    scaling: ScalingFactors = UNIT_SCALING
    link: LinkBudget = LinkBudget()
    rectenna: RectennaParams = RectennaParams()
    fading: FadingMoments = NO_FADING
    ensemble: EnsembleConfig = EnsembleConfig()
    n_tones: int = 4

    def __post_init__(self):
        if self.system not in ("lorenz", "henon", "multisine"):
            raise ValueError(f"unknown system {self.system!r}")
        if self.n_tones < 1:
            raise ValueError("n_tones must be >= 1")


@dataclass(frozen=True)
class SweepSpec:
    """One parameter swept over explicit values, everything else fixed."""

    parameter: str
    values: tuple
    fixed: SystemConfig


@dataclass(frozen=True)
class EnsembleResult:
    """Aggregate statistics of one ensemble (or one deterministic waveform).

    Moment statistics are per-realization time averages over the
    post-transient window, averaged across non-diverged realizations; stderr
    fields are standard errors of those across-realization means.  Statistics
    are NaN when every realization diverged.  ``fraction_converged`` counts
    realizations whose settling was certified by detect_steady_state (diverged
    realizations count as non-converged).
    """

    config: SystemConfig
    report: HarvestReport
    m2_mean: float
    m2_stderr: float
    m4_mean: float
    m4_stderr: float
    papr_db_mean: float
    papr_db_stderr: float
    n_realizations: int
    n_diverged: int
    fraction_converged: float
    mean_convergence_time: float


def initial_points(cfg: EnsembleConfig, box: tuple[tuple[float, float], ...]) -> np.ndarray:
    """Draw one initial point per realization from independent keyed streams."""
    bounds = np.asarray(box, dtype=float)
    root = np.random.Philox(key=cfg.seed)
    pts = np.empty((cfg.n_realizations, bounds.shape[0]))
    for i in range(cfg.n_realizations):
        gen = np.random.Generator(root.jumped(i))
        pts[i] = gen.uniform(bounds[:, 0], bounds[:, 1])
    return pts


def _first_quiet_index(samples: np.ndarray, tol: float) -> int | None:
    """First row from which every component's remaining excursion is <= tol.

    The certifying suffix must contain at least 10% of the rows (and no fewer
    than two), otherwise detection is refused.
    """
    rev = samples[::-1]
    hi = np.maximum.accumulate(rev, axis=0)[::-1]
    lo = np.minimum.accumulate(rev, axis=0)[::-1]
    variation = (hi - lo).max(axis=1)
    quiet = variation <= tol
    if not quiet.any():
        return None
    first = int(np.argmax(quiet))
    n = samples.shape[0]
    min_window = max(2, int(math.ceil(0.1 * n)))
    return first if n - first >= min_window else None


def detect_steady_state(traj: Trajectory, tol: float = 1e-3) -> int | None:
    """Index where the orbit has settled, or None if it never certifiably does."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return _first_quiet_index(traj.samples, tol)


def _run_batched(config: SystemConfig) -> EnsembleResult:
    """Shared ensemble engine for the flow and the map."""
    ens = config.ensemble
    if config.system == "lorenz":
        dim, dt = 3, ens.dt
        n_steps = steps_for_horizon(ens.horizon, ens.dt)
        box = ens.init_box if ens.init_box is not None else LORENZ_INIT_BOX
        verdict = hurwitz_stable(config.lorenz)
        consts = rate_constants(config.lorenz, config.scaling)
        stride = max(1, int(round(_DETECTION_SPACING / dt)))
    else:
        dim, dt = 2, 1.0
        n_steps = int(math.floor(ens.horizon))
        box = ens.init_box if ens.init_box is not None else HENON_INIT_BOX
        verdict = henon_stable(config.henon)
        stride = 1
    if len(box) != dim:
        raise ValueError(f"init_box must have {dim} (low, high) pairs for {config.system}")

    n_samples = n_steps + 1
    cutoff = transient_cutoff_index(n_samples, ens.transient_fraction)
    # Chaotic (unstable) regimes have no settling point; measure PAPR once the
    # orbit has had 10% of the horizon to reach the attractor.
    papr_start = cutoff if verdict.stable else min(cutoff, max(1, int(0.1 * n_samples)))
    first_window = min(cutoff, papr_start)
    m_count = n_samples - cutoff
    p_count = n_samples - papr_start
    n_det = 1 + (n_samples - 1) // stride
    bound = DEFAULT_DIVERGENCE_BOUND

    pts = initial_points(ens, box)
    n = ens.n_realizations
    ok = np.ones(n, dtype=bool)
    m2 = np.full(n, np.nan)
    m4 = np.full(n, np.nan)
    papr_db = np.full(n, np.nan)
    converged = np.zeros(n, dtype=bool)
    conv_time = np.full(n, np.nan)

    for start in range(0, n, _CHUNK):
        sl = slice(start, min(start + _CHUNK, n))
        width = sl.stop - sl.start
        comps = [pts[sl, j].copy() for j in range(dim)]
        alive = np.ones(width, dtype=bool)
        n_bad = 0
        s2 = np.zeros(width)
        s4 = np.zeros(width)
        pmax = np.zeros(width)
        psum = np.zeros(width)
        det = np.empty((width, n_det, dim))

        for k in range(n_samples):
            if k:
                if dim == 3:
                    comps = list(rk4_step(comps[0], comps[1], comps[2], dt, consts))
                else:
                    comps = list(henon_step(comps, config.henon))
                bad = ~(np.abs(comps[0]) <= bound)
                for c in comps[1:]:
                    bad |= ~(np.abs(c) <= bound)
                newly = bad & alive
                if newly.any():
                    alive &= ~newly
                    n_bad += int(newly.sum())
                if n_bad:
                    # freeze diverged rows at the origin so they cannot overflow;
                    # their accumulators are discarded below
                    dead = ~alive
                    for c in comps:
                        c[dead] = 0.0
            if k >= first_window:
                x2 = comps[0] * comps[0]
                if k >= cutoff:
                    s2 += x2
                    s4 += x2 * x2
                if k >= papr_start:
                    np.maximum(pmax, x2, out=pmax)
                    psum += x2
            if k % stride == 0:
                row = k // stride
                for j in range(dim):
                    det[:, row, j] = comps[j]

        ok[sl] = alive
        m2[sl] = np.where(alive, s2 / m_count, np.nan)
        m4[sl] = np.where(alive, s4 / m_count, np.nan)
        with np.errstate(divide="ignore", invalid="ignore"):
            papr_db[sl] = np.where(
                alive & (psum > 0.0),
                10.0 * np.log10(pmax / (psum / p_count)),
                np.nan,
            )
        for i in range(width):
            if not alive[i]:
                continue
            idx = _first_quiet_index(det[i], ens.steady_state_tol)
            if idx is not None:
                converged[sl.start + i] = True
                conv_time[sl.start + i] = idx * stride * dt

    return _aggregate(config, verdict.stable, ok, m2, m4, papr_db, converged, conv_time)


def _mean_stderr(values: np.ndarray) -> tuple[float, float]:
    k = values.size
    if k == 0:
        return float("nan"), float("nan")
    if k == 1:
        return float(values[0]), 0.0
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(k))


def _aggregate(config, stable, ok, m2, m4, papr_db, converged, conv_time) -> EnsembleResult:
    n = ok.size
    m2_mean, m2_se = _mean_stderr(m2[ok])
    m4_mean, m4_se = _mean_stderr(m4[ok])
    papr_ok = papr_db[ok & np.isfinite(papr_db)]
    papr_mean, papr_se = _mean_stderr(papr_ok)

    coeff = with_fading(coefficients(config.link, config.rectenna), config.fading)
    if stable:
        if config.system == "lorenz":
            eta_analytic = eta_scaled_lorenz(config.lorenz, config.scaling, coeff)
        else:
            eta_analytic = eta_henon(config.henon, coeff)
    else:
        eta_analytic = None
    eta_empirical = (
        dc_from_moments(m2_mean, m4_mean, coeff) if math.isfinite(m2_mean) else None
    )
    report = HarvestReport(
        eta_analytic=eta_analytic,
        eta_empirical=eta_empirical,
        papr_db=papr_mean if math.isfinite(papr_mean) else None,
        stable=stable,
    )
    times = conv_time[converged]
    return EnsembleResult(
        config=config,
        report=report,
        m2_mean=m2_mean,
        m2_stderr=m2_se,
        m4_mean=m4_mean,
        m4_stderr=m4_se,
        papr_db_mean=papr_mean,
        papr_db_stderr=papr_se,
        n_realizations=n,
        n_diverged=n - int(ok.sum()),
        fraction_converged=float(converged.sum()) / n,
        mean_convergence_time=float(times.mean()) if times.size else float("nan"),
    )


def run_ensemble(config: SystemConfig) -> EnsembleResult:
    """Integrate one ensemble and compare measured moments with the closed form."""
    if config.system not in ("lorenz", "henon"):
        raise ValueError(f"run_ensemble applies to lorenz/henon, not {config.system!r}")
    return _run_batched(config)


def multisine_result(config: SystemConfig) -> EnsembleResult:
    """Deterministic multisine baseline presented in the same result shape."""
    m2, m4 = multisine_moments(config.n_tones)
    coeff = with_fading(coefficients(config.link, config.rectenna), config.fading)
    papr = waveform_papr_db(multisine_waveform(config.n_tones, 10_000))
    report = HarvestReport(
        eta_analytic=dc_from_moments(m2, m4, coeff),
        eta_empirical=None,
        papr_db=papr,
        stable=True,
    )
    return EnsembleResult(
        config=config,
        report=report,
        m2_mean=m2,
        m2_stderr=0.0,
        m4_mean=m4,
        m4_stderr=0.0,
        papr_db_mean=papr,
        papr_db_stderr=0.0,
        n_realizations=1,
        n_diverged=0,
        fraction_converged=1.0,
        mean_convergence_time=float("nan"),
    )


def with_link(result: EnsembleResult, link: LinkBudget) -> EnsembleResult:
    """Re-price an already-run result under a different link budget.

    The waveform statistics do not depend on the link, so only the coefficients
    of the DC model change; no re-integration happens.
    """
    cfg = replace(result.config, link=link)
    coeff = with_fading(coefficients(link, cfg.rectenna), cfg.fading)
    stable = result.report.stable
    if not stable:
        eta_analytic = None
    elif cfg.system == "lorenz":
        eta_analytic = eta_scaled_lorenz(cfg.lorenz, cfg.scaling, coeff)
    elif cfg.system == "henon":
        eta_analytic = eta_henon(cfg.henon, coeff)
    else:
        eta_analytic = dc_from_moments(result.m2_mean, result.m4_mean, coeff)
    if cfg.system == "multisine" or not math.isfinite(result.m2_mean):
        eta_empirical = None
    else:
        eta_empirical = dc_from_moments(result.m2_mean, result.m4_mean, coeff)
    report = replace(result.report, eta_analytic=eta_analytic, eta_empirical=eta_empirical)
    return replace(result, config=cfg, report=report)


#: which swept parameter applies to which system
_SWEEPABLE = {
    "r": ("lorenz",),
    "sigma": ("lorenz",),
    "beta": ("lorenz",),
    "eps": ("lorenz",),
    "gamma": ("henon",),
    "delta": ("henon",),
    "n_tones": ("multisine",),
    "pt_dbm": ("lorenz", "henon", "multisine"),
}


def patched_config(base: SystemConfig, parameter: str, value) -> SystemConfig:
    """Copy of ``base`` with one swept parameter replaced."""
    if parameter not in _SWEEPABLE:
        raise InvalidSweepError(f"unknown sweep parameter {parameter!r}")
    if base.system not in _SWEEPABLE[parameter]:
        raise InvalidSweepError(
            f"parameter {parameter!r} does not apply to system {base.system!r}"
        )
    if parameter in ("r", "sigma", "beta"):
        return replace(base, lorenz=replace(base.lorenz, **{parameter: value}))
    if parameter == "eps":
        return replace(base, scaling=ScalingFactors(value, value, value))
    if parameter in ("gamma", "delta"):
        return replace(base, henon=replace(base.henon, **{parameter: value}))
    if parameter == "n_tones":
        return replace(base, n_tones=int(value))
    return replace(base, link=replace(base.link, pt_dbm=value))


def sweep(spec: SweepSpec) -> list[EnsembleResult]:
    """Run one ensemble (or deterministic evaluation) per swept value, in order."""
    if not spec.values:
        raise InvalidSweepError("sweep requires at least one value")
    results = []
    for value in spec.values:
        cfg = patched_config(spec.fixed, spec.parameter, value)
        if cfg.system == "multisine":
            results.append(multisine_result(cfg))
        else:
            results.append(run_ensemble(cfg))
    return results
