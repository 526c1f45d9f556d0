#!/usr/bin/env python3
"""Regenerate every headline experiment from the checked-in configs.

Writes one results/<name>/ directory per config, each holding the CSV
artifacts plus the resolved run manifest.  Full scale takes a few
minutes (the fig2 and fig4 ensembles dominate); --quick drops those two
to 50 realizations for a fast smoke run.
"""

import argparse
import sys
import time
from pathlib import Path

from chaoswpt.cli import main as run_cli

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"

RUNS = (
    "trajectory_stable",
    "trajectory_chaotic",
    "stability_scan",
    "fig2",
    "fig3",
    "fig4",
)

# experiments whose cost scales with the realization count
_ENSEMBLE_HEAVY = {"fig2", "fig4"}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(ROOT / "results"), help="results root directory")
    parser.add_argument("--seed", type=int, default=None, help="override every run's seed")
    parser.add_argument(
        "--quick", action="store_true", help="50 realizations for the heavy ensembles"
    )
    args = parser.parse_args(argv)

    results = Path(args.out)
    for name in RUNS:
        cli_args = ["run", str(CONFIGS / f"{name}.yaml"), "--out", str(results / name)]
        if args.seed is not None:
            cli_args += ["--seed", str(args.seed)]
        if args.quick and name in _ENSEMBLE_HEAVY:
            cli_args += ["--realizations", "50"]
        print(f"== {name}", flush=True)
        started = time.perf_counter()
        status = run_cli(cli_args)
        if status != 0:
            print(f"{name} failed with exit status {status}", file=sys.stderr)
            return status
        print(f"   done in {time.perf_counter() - started:.1f}s", flush=True)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
