"""CSV/text serialization with atomic writes and full-precision floats.

Floats are rendered with %.17g so every written value round-trips to the same
IEEE double; runs with identical configs therefore produce byte-identical
files.  Writers stage into a temp file in the destination directory and
os.replace() it into place, so a crashed run never leaves a partial file.
"""

from __future__ import annotations

import math
import os
import tempfile
from pathlib import Path

#: column order of the harvest/sweep CSV emitted by the experiment runner
HARVEST_HEADER = [
    "system",
    "r_or_gamma",
    "delta",
    "eps",
    "pt_dbm",
    "eta_analytic",
    "eta_empirical",
    "papr_db",
    "stable",
    "m2_emp",
    "m2_stderr",
    "m4_emp",
    "m4_stderr",
]

SCAN_HEADER = ["sigma", "beta", "r", "stable", "minor1", "minor2", "minor3"]


def fmt_value(v) -> str:
    """Render one CSV cell; None and NaN become the empty cell."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int,)):
        return str(v)
    if isinstance(v, float):
        return "" if math.isnan(v) else "%.17g" % v
    return str(v)


def csv_text(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt_value(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_text_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv_atomic(path: str | Path, header: list[str], rows: list[list]) -> None:
    write_text_atomic(path, csv_text(header, rows))


def trajectory_csv(traj) -> str:
    """Serialize a Trajectory: ``t,x,y,z`` for flows, ``n,x,y`` for maps."""
    samples = traj.samples
    if samples.shape[1] == 3:
        lines = ["t,x,y,z"]
        for k, row in enumerate(samples):
            lines.append(
                "%.17g,%.17g,%.17g,%.17g" % (k * traj.dt, row[0], row[1], row[2])
            )
    else:
        lines = ["n,x,y"]
        for k, row in enumerate(samples):
            lines.append("%d,%.17g,%.17g" % (k, row[0], row[1]))
    return "\n".join(lines) + "\n"


def harvest_row(result) -> list:
    """Flatten one EnsembleResult into the HARVEST_HEADER columns."""
    cfg = result.config
    if cfg.system == "lorenz":
        swept, delta, eps = cfg.lorenz.r, None, cfg.scaling.eps_x
    elif cfg.system == "henon":
        swept, delta, eps = cfg.henon.gamma, cfg.henon.delta, None
    else:
        swept, delta, eps = cfg.n_tones, None, None
    rep = result.report
    return [
        cfg.system,
        swept,
        delta,
        eps,
        cfg.link.pt_dbm,
        rep.eta_analytic,
        rep.eta_empirical,
        rep.papr_db,
        rep.stable,
        result.m2_mean,
        result.m2_stderr,
        result.m4_mean,
        result.m4_stderr,
    ]
