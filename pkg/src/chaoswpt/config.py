"""YAML experiment configuration: validation, defaults, manifest echo.

A config document is a mapping with the blocks below; every block and every
field is optional and falls back to its default, so the empty document is a
valid config.  Validation collects *all* violations and reports them together
in a single ConfigError rather than stopping at the first.

Each run writes ``manifest.yaml``, the fully resolved configuration (defaults
and command-line overrides applied).  Feeding the manifest back in as the
config reproduces the run.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import yaml

from .dynamics import HenonParams, LorenzParams, ScalingFactors
from .errors import ConfigError
from .harvest import FadingMoments, LinkBudget, RectennaParams
from .montecarlo import _SWEEPABLE, EnsembleConfig, SystemConfig

EXPERIMENTS = ("trajectory", "stability-scan", "fig2", "fig3", "fig4", "sweep")


@dataclass(frozen=True)
class TrajectorySpec:
    """Single-orbit experiment: one initial point, one integration."""

    p_in: tuple = (1.0, -5.0, 20.0)
    dt: float = 1e-3
    horizon: float = 50.0


@dataclass(frozen=True)
class ScanSpec:
    """Stability-certificate grid over (sigma, beta, r)."""

    sigma_values: tuple = (10.0,)
    beta_values: tuple = (8.0 / 3.0,)
    r_values: tuple = (5.0, 10.0, 15.0, 20.0, 24.7, 24.8, 30.0)


@dataclass(frozen=True)
class Fig2Spec:
    """DC-versus-r curves, one per scaling factor, analytic next to measured."""

    r_values: tuple = (5.0, 10.0, 15.0, 20.0)
    eps_values: tuple = (1.0, 2.0, 6.0)


@dataclass(frozen=True)
class Fig3Spec:
    """PAPR-versus-r curves in the chaotic band, one file per (sigma, eps)."""

    r_values: tuple = (26.0, 28.0, 30.0, 32.0, 34.0, 36.0, 38.0, 40.0)
    eps_values: tuple = (1.0, 6.0)
    sigma_values: tuple = (10.0, 14.0)
    p_in: tuple = (0.1, 10.0, 0.1)
    n_realizations: int = 1


@dataclass(frozen=True)
class Fig4Spec:
    """Harvested DC versus transmit power for all three waveform families."""

    pt_dbm_values: tuple = (10.0, 15.0, 20.0, 25.0, 30.0)
    lorenz_r_values: tuple = (12.0,)
    henon_params: tuple = ((0.2, 0.1), (0.001, 0.9))
    n_tones_values: tuple = (1, 2, 4, 8)


@dataclass(frozen=True)
class SweepSettings:
    """Generic one-parameter sweep of the configured system."""

    parameter: str = "r"
    values: tuple = (5.0, 10.0, 15.0, 20.0)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "trajectory"
    out_dir: str = "results"
    base: SystemConfig = SystemConfig()
    trajectory: TrajectorySpec = TrajectorySpec()
    scan: ScanSpec = ScanSpec()
    fig2: Fig2Spec = Fig2Spec()
    fig3: Fig3Spec = Fig3Spec()
    fig4: Fig4Spec = Fig4Spec()
    sweep: SweepSettings = SweepSettings()


def _is_num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


class _Checker:
    """Accumulates violation messages while pulling typed fields out of a doc."""

    def __init__(self):
        self.problems: list[str] = []

    def complain(self, msg: str) -> None:
        self.problems.append(msg)

    def block(self, doc: dict, key: str, known: tuple[str, ...]) -> dict:
        raw = doc.get(key)
        if raw is None:
            return {}
        if not isinstance(raw, dict):
            self.complain(f"{key}: must be a mapping")
            return {}
        for k in raw:
            if k not in known:
                self.complain(f"{key}: unknown key {k!r}")
        return raw

    @staticmethod
    def _label(block_name: str, key: str) -> str:
        return f"{block_name}.{key}" if block_name else key

    def num(self, blk: dict, block_name: str, key: str, default, pred=None, desc: str = ""):
        v = blk.get(key, default)
        if not _is_num(v):
            self.complain(f"{self._label(block_name, key)}: must be a number")
            return default
        if pred is not None and not pred(v):
            self.complain(f"{self._label(block_name, key)}: {desc}, got {v!r}")
            return default
        return v

    def integer(self, blk: dict, block_name: str, key: str, default, pred=None, desc: str = ""):
        v = blk.get(key, default)
        if not isinstance(v, int) or isinstance(v, bool):
            self.complain(f"{self._label(block_name, key)}: must be an integer")
            return default
        if pred is not None and not pred(v):
            self.complain(f"{self._label(block_name, key)}: {desc}, got {v!r}")
            return default
        return v

    def num_list(self, blk: dict, block_name: str, key: str, default, pred=None, desc: str = ""):
        v = blk.get(key)
        if v is None:
            return tuple(default)
        if not isinstance(v, (list, tuple)) or not v or not all(_is_num(x) for x in v):
            self.complain(f"{self._label(block_name, key)}: must be a non-empty list of numbers")
            return tuple(default)
        if pred is not None:
            for x in v:
                if not pred(x):
                    self.complain(f"{self._label(block_name, key)}: {desc}, got {x!r}")
                    return tuple(default)
        return tuple(v)


def _parse_point(ck: _Checker, blk: dict, block_name: str, key: str, default: tuple) -> tuple:
    v = blk.get(key)
    if v is None:
        return default
    if (
        not isinstance(v, (list, tuple))
        or len(v) not in (2, 3)
        or not all(_is_num(x) for x in v)
    ):
        ck.complain(f"{block_name}.{key}: must be a list of 2 or 3 numbers")
        return default
    return tuple(v)


def config_from_document(doc: dict) -> ExperimentConfig:
    """Build a fully-resolved config from a parsed YAML document."""
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigError(["document must be a mapping"])
    ck = _Checker()

    known_top = (
        "experiment", "out_dir", "system", "lorenz", "henon", "scaling", "link",
        "rectenna", "fading", "ensemble", "n_tones", "trajectory", "scan",
        "fig2", "fig3", "fig4", "sweep",
    )
    for k in doc:
        if k not in known_top:
            ck.complain(f"unknown key {k!r}")

    experiment = doc.get("experiment", "trajectory")
    if experiment not in EXPERIMENTS:
        ck.complain(f"experiment: must be one of {', '.join(EXPERIMENTS)}, got {experiment!r}")
        experiment = "trajectory"
    out_dir = doc.get("out_dir", "results")
    if not isinstance(out_dir, str) or not out_dir:
        ck.complain("out_dir: must be a non-empty string")
        out_dir = "results"
    system = doc.get("system", "lorenz")
    if system not in ("lorenz", "henon", "multisine"):
        ck.complain(f"system: must be lorenz, henon or multisine, got {system!r}")
        system = "lorenz"

    blk = ck.block(doc, "lorenz", ("sigma", "r", "beta"))
    pos = lambda x: x > 0
    lorenz = LorenzParams(
        sigma=ck.num(blk, "lorenz", "sigma", 10.0, pos, "must be > 0"),
        r=ck.num(blk, "lorenz", "r", 12.0, pos, "must be > 0"),
        beta=ck.num(blk, "lorenz", "beta", 8.0 / 3.0, pos, "must be > 0"),
    )

    blk = ck.block(doc, "henon", ("gamma", "delta"))
    henon = HenonParams(
        gamma=ck.num(blk, "henon", "gamma", 0.2, lambda x: x != 0, "must be nonzero"),
        delta=ck.num(blk, "henon", "delta", 0.1),
    )

    blk = ck.block(doc, "scaling", ("eps_x", "eps_y", "eps_z"))
    ge1 = lambda x: x >= 1
    scaling = ScalingFactors(
        eps_x=ck.num(blk, "scaling", "eps_x", 1.0, ge1, "must be >= 1"),
        eps_y=ck.num(blk, "scaling", "eps_y", 1.0, ge1, "must be >= 1"),
        eps_z=ck.num(blk, "scaling", "eps_z", 1.0, ge1, "must be >= 1"),
    )

    blk = ck.block(doc, "link", ("pt_dbm", "d_m", "alpha"))
    link = LinkBudget(
        pt_dbm=ck.num(blk, "link", "pt_dbm", 30.0),
        d_m=ck.num(blk, "link", "d_m", 20.0, pos, "must be > 0"),
        alpha=ck.num(blk, "link", "alpha", 4.0, lambda x: x >= 0, "must be >= 0"),
    )

    blk = ck.block(doc, "rectenna", ("k2", "k4", "r_ant"))
    rectenna = RectennaParams(
        k2=ck.num(blk, "rectenna", "k2", 0.0034, pos, "must be > 0"),
        k4=ck.num(blk, "rectenna", "k4", 0.3829, pos, "must be > 0"),
        r_ant=ck.num(blk, "rectenna", "r_ant", 50.0, pos, "must be > 0"),
    )

    blk = ck.block(doc, "fading", ("m2", "m4"))
    f_m2 = ck.num(blk, "fading", "m2", 1.0, lambda x: x >= 0, "must be >= 0")
    f_m4 = ck.num(blk, "fading", "m4", 1.0, lambda x: x >= 0, "must be >= 0")
    if f_m4 < f_m2 * f_m2 * (1.0 - 1e-9):
        ck.complain(f"fading: m4 must be >= m2^2, got m2={f_m2!r}, m4={f_m4!r}")
        f_m2, f_m4 = 1.0, 1.0
    fading = FadingMoments(m2=f_m2, m4=f_m4)

    blk = ck.block(
        doc, "ensemble",
        ("n_realizations", "seed", "init_box", "dt", "horizon",
         "steady_state_tol", "transient_fraction"),
    )
    init_box = blk.get("init_box")
    if init_box is not None:
        bad = (
            not isinstance(init_box, (list, tuple))
            or len(init_box) not in (2, 3)
            or not all(
                isinstance(p, (list, tuple)) and len(p) == 2
                and all(_is_num(b) for b in p) and p[0] <= p[1]
                for p in init_box
            )
        )
        if bad:
            ck.complain("ensemble.init_box: must be 2 or 3 [low, high] pairs with low <= high")
            init_box = None
        else:
            init_box = tuple(tuple(p) for p in init_box)
    ensemble = EnsembleConfig(
        n_realizations=ck.integer(blk, "ensemble", "n_realizations", 1000, lambda x: x >= 1, "must be >= 1"),
        seed=ck.integer(blk, "ensemble", "seed", 1, lambda x: 0 <= x < 2**64, "must fit in uint64"),
        init_box=init_box,
        dt=ck.num(blk, "ensemble", "dt", 1e-3, pos, "must be > 0"),
        horizon=ck.num(blk, "ensemble", "horizon", 100.0, pos, "must be > 0"),
        steady_state_tol=ck.num(blk, "ensemble", "steady_state_tol", 1e-3, pos, "must be > 0"),
        transient_fraction=ck.num(blk, "ensemble", "transient_fraction", 0.5, lambda x: 0 <= x < 1, "must be in [0, 1)"),
    )

    n_tones = ck.integer({"n_tones": doc.get("n_tones", 4)}, "", "n_tones", 4, lambda x: x >= 1, "must be >= 1")

    blk = ck.block(doc, "trajectory", ("p_in", "dt", "horizon"))
    trajectory = TrajectorySpec(
        p_in=_parse_point(ck, blk, "trajectory", "p_in", (1.0, -5.0, 20.0)),
        dt=ck.num(blk, "trajectory", "dt", 1e-3, pos, "must be > 0"),
        horizon=ck.num(blk, "trajectory", "horizon", 50.0, pos, "must be > 0"),
    )
    if experiment == "trajectory":
        if system == "multisine":
            ck.complain("trajectory experiment requires system lorenz or henon")
        else:
            want = 3 if system == "lorenz" else 2
            if len(trajectory.p_in) != want:
                ck.complain(f"trajectory.p_in: needs {want} components for system {system!r}")

    blk = ck.block(doc, "scan", ("sigma_values", "beta_values", "r_values"))
    scan = ScanSpec(
        sigma_values=ck.num_list(blk, "scan", "sigma_values", ScanSpec.sigma_values, pos, "values must be > 0"),
        beta_values=ck.num_list(blk, "scan", "beta_values", ScanSpec.beta_values, pos, "values must be > 0"),
        r_values=ck.num_list(blk, "scan", "r_values", ScanSpec.r_values, pos, "values must be > 0"),
    )

    blk = ck.block(doc, "fig2", ("r_values", "eps_values"))
    fig2 = Fig2Spec(
        r_values=ck.num_list(blk, "fig2", "r_values", Fig2Spec.r_values, pos, "values must be > 0"),
        eps_values=ck.num_list(blk, "fig2", "eps_values", Fig2Spec.eps_values, ge1, "values must be >= 1"),
    )

    blk = ck.block(doc, "fig3", ("r_values", "eps_values", "sigma_values", "p_in", "n_realizations"))
    fig3 = Fig3Spec(
        r_values=ck.num_list(blk, "fig3", "r_values", Fig3Spec.r_values, pos, "values must be > 0"),
        eps_values=ck.num_list(blk, "fig3", "eps_values", Fig3Spec.eps_values, ge1, "values must be >= 1"),
        sigma_values=ck.num_list(blk, "fig3", "sigma_values", Fig3Spec.sigma_values, pos, "values must be > 0"),
        p_in=_parse_point(ck, blk, "fig3", "p_in", Fig3Spec.p_in),
        n_realizations=ck.integer(blk, "fig3", "n_realizations", 1, lambda x: x >= 1, "must be >= 1"),
    )
    if len(fig3.p_in) != 3:
        ck.complain("fig3.p_in: needs 3 components")

    blk = ck.block(doc, "fig4", ("pt_dbm_values", "lorenz_r_values", "henon_params", "n_tones_values"))
    henon_params = blk.get("henon_params")
    if henon_params is None:
        henon_params = Fig4Spec.henon_params
    else:
        bad = (
            not isinstance(henon_params, (list, tuple)) or not henon_params
            or not all(
                isinstance(p, (list, tuple)) and len(p) == 2
                and all(_is_num(v) for v in p) and p[0] != 0
                for p in henon_params
            )
        )
        if bad:
            ck.complain("fig4.henon_params: must be a non-empty list of [gamma, delta] pairs, gamma != 0")
            henon_params = Fig4Spec.henon_params
        else:
            henon_params = tuple(tuple(p) for p in henon_params)
    n_tones_values = blk.get("n_tones_values")
    if n_tones_values is None:
        n_tones_values = Fig4Spec.n_tones_values
    elif (
        not isinstance(n_tones_values, (list, tuple)) or not n_tones_values
        or not all(isinstance(v, int) and not isinstance(v, bool) and v >= 1 for v in n_tones_values)
    ):
        ck.complain("fig4.n_tones_values: must be a non-empty list of integers >= 1")
        n_tones_values = Fig4Spec.n_tones_values
    else:
        n_tones_values = tuple(n_tones_values)
    fig4 = Fig4Spec(
        pt_dbm_values=ck.num_list(blk, "fig4", "pt_dbm_values", Fig4Spec.pt_dbm_values),
        lorenz_r_values=ck.num_list(blk, "fig4", "lorenz_r_values", Fig4Spec.lorenz_r_values, pos, "values must be > 0"),
        henon_params=henon_params,
        n_tones_values=n_tones_values,
    )

    blk = ck.block(doc, "sweep", ("parameter", "values"))
    parameter = blk.get("parameter", "r")
    if parameter not in _SWEEPABLE:
        ck.complain(f"sweep.parameter: must be one of {', '.join(sorted(_SWEEPABLE))}, got {parameter!r}")
        parameter = "r"
    sweep_values = ck.num_list(blk, "sweep", "values", SweepSettings.values)
    if experiment == "sweep" and system not in _SWEEPABLE.get(parameter, ()):
        ck.complain(f"sweep.parameter: {parameter!r} does not apply to system {system!r}")

    if ck.problems:
        raise ConfigError(ck.problems)

    base = SystemConfig(
        system=system, lorenz=lorenz, henon=henon, scaling=scaling, link=link,
        rectenna=rectenna, fading=fading, ensemble=ensemble, n_tones=n_tones,
    )
    return ExperimentConfig(
        experiment=experiment, out_dir=out_dir, base=base, trajectory=trajectory,
        scan=scan, fig2=fig2, fig3=fig3, fig4=fig4,
        sweep=SweepSettings(parameter=parameter, values=sweep_values),
    )


def validate_config(text: str) -> ExperimentConfig:
    """Parse and validate a YAML config, reporting every violation at once."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError([f"not valid YAML: {exc}"]) from exc
    return config_from_document(doc)


def load_config(path) -> ExperimentConfig:
    with open(path, "r") as fh:
        return validate_config(fh.read())


def to_document(cfg: ExperimentConfig) -> dict:
    """Fully-resolved plain-python echo of a config (the manifest content)."""
    b = cfg.base
    return {
        "experiment": cfg.experiment,
        "out_dir": cfg.out_dir,
        "system": b.system,
        "lorenz": {"sigma": b.lorenz.sigma, "r": b.lorenz.r, "beta": b.lorenz.beta},
        "henon": {"gamma": b.henon.gamma, "delta": b.henon.delta},
        "scaling": {"eps_x": b.scaling.eps_x, "eps_y": b.scaling.eps_y, "eps_z": b.scaling.eps_z},
        "link": {"pt_dbm": b.link.pt_dbm, "d_m": b.link.d_m, "alpha": b.link.alpha},
        "rectenna": {"k2": b.rectenna.k2, "k4": b.rectenna.k4, "r_ant": b.rectenna.r_ant},
        "fading": {"m2": b.fading.m2, "m4": b.fading.m4},
        "ensemble": {
            "n_realizations": b.ensemble.n_realizations,
            "seed": b.ensemble.seed,
            "init_box": None if b.ensemble.init_box is None else [list(p) for p in b.ensemble.init_box],
            "dt": b.ensemble.dt,
            "horizon": b.ensemble.horizon,
            "steady_state_tol": b.ensemble.steady_state_tol,
            "transient_fraction": b.ensemble.transient_fraction,
        },
        "n_tones": b.n_tones,
        "trajectory": {"p_in": list(cfg.trajectory.p_in), "dt": cfg.trajectory.dt, "horizon": cfg.trajectory.horizon},
        "scan": {
            "sigma_values": list(cfg.scan.sigma_values),
            "beta_values": list(cfg.scan.beta_values),
            "r_values": list(cfg.scan.r_values),
        },
        "fig2": {"r_values": list(cfg.fig2.r_values), "eps_values": list(cfg.fig2.eps_values)},
        "fig3": {
            "r_values": list(cfg.fig3.r_values),
            "eps_values": list(cfg.fig3.eps_values),
            "sigma_values": list(cfg.fig3.sigma_values),
            "p_in": list(cfg.fig3.p_in),
            "n_realizations": cfg.fig3.n_realizations,
        },
        "fig4": {
            "pt_dbm_values": list(cfg.fig4.pt_dbm_values),
            "lorenz_r_values": list(cfg.fig4.lorenz_r_values),
            "henon_params": [list(p) for p in cfg.fig4.henon_params],
            "n_tones_values": list(cfg.fig4.n_tones_values),
        },
        "sweep": {"parameter": cfg.sweep.parameter, "values": list(cfg.sweep.values)},
    }


def manifest_text(cfg: ExperimentConfig) -> str:
    return yaml.safe_dump(to_document(cfg), sort_keys=True, default_flow_style=False)


def apply_overrides(
    cfg: ExperimentConfig,
    seed: int | None = None,
    out_dir: str | None = None,
    n_realizations: int | None = None,
) -> ExperimentConfig:
    """Fold command-line overrides into a validated config."""
    if seed is not None:
        if not 0 <= seed < 2**64:
            raise ConfigError(["--seed: must fit in an unsigned 64-bit integer"])
        cfg = replace(cfg, base=replace(cfg.base, ensemble=replace(cfg.base.ensemble, seed=seed)))
    if n_realizations is not None:
        if n_realizations < 1:
            raise ConfigError(["--realizations: must be >= 1"])
        cfg = replace(
            cfg,
            base=replace(cfg.base, ensemble=replace(cfg.base.ensemble, n_realizations=n_realizations)),
            fig3=replace(cfg.fig3, n_realizations=n_realizations),
        )
    if out_dir is not None:
        if not out_dir:
            raise ConfigError(["--out: must be a non-empty path"])
        cfg = replace(cfg, out_dir=out_dir)
    return cfg
