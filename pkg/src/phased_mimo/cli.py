"""Command-line entry point: one subcommand per experiment, plus ``verify``."""
from __future__ import annotations

import argparse
import sys

from .config import ConfigError, Experiment, load_config
from .experiments import run_experiment
from .results import verify_file


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phased-mimo",
        description="Phased-MIMO radar beampattern and SINR experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for exp in Experiment:
        p = sub.add_parser(exp.value, help=f"run the {exp.value} experiment")
        p.add_argument("--config", metavar="PATH", help="JSON experiment config")
        p.add_argument("--out", metavar="DIR", default="results", help="output directory")
        p.add_argument("--seed", type=_u64, help="override the config seed")
        p.add_argument("--runs", type=int, help="override the Monte-Carlo run count")
        p.add_argument("--grid-deg", type=float, help="override the angle grid resolution")
        p.add_argument("--workers", type=int, default=1, help="parallel Monte-Carlo workers")
    v = sub.add_parser("verify", help="check the scenario hash embedded in result files")
    v.add_argument("files", nargs="+")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        status = 0
        for f in args.files:
            try:
                ok, msg = verify_file(f)
            except (OSError, ValueError) as err:
                ok, msg = False, f"{f}: {err}"
            print(msg)
            status |= not ok
        return status

    try:
        cfg = load_config(args.config, experiment=args.command, seed=args.seed,
                          runs=args.runs, grid_deg=args.grid_deg)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    paths, out = run_experiment(cfg, args.out, workers=max(1, args.workers))
    for line in out.summary:
        print(line)
    for p in paths:
        print(f"wrote {p}")
    if out.passed is False:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
