"""Command line entry point.

    perturblab <experiment> [--config FILE] [--out DIR]
                            [--format csv,json,svg] [--seed N]
    perturblab validate --config FILE
    perturblab --list

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 acceptance-suite failure.
"""

from __future__ import annotations

import argparse
import sys

from .config import (EXPERIMENTS, ConfigError, load_config_file,
                     resolve_config)
from .experiments import run_experiment


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perturblab",
        description="reproducible perturbation-theory experiments")
    parser.add_argument("experiment", nargs="?",
                        help="experiment name, or 'validate' to check a "
                             "config file without running anything")
    parser.add_argument("--experiment", dest="experiment_flag", metavar="NAME",
                        help="experiment name (overrides the config file)")
    parser.add_argument("--config", metavar="FILE",
                        help="JSON configuration file")
    parser.add_argument("--out", metavar="DIR",
                        help="output directory (overrides the config file)")
    parser.add_argument("--format", metavar="LIST",
                        help="comma separated subset of csv,json,svg")
    parser.add_argument("--seed", type=int, metavar="N",
                        help="rng seed for portrait seed scattering")
    parser.add_argument("--list", action="store_true",
                        help="list the available experiments and exit")
    return parser


def _print_listing() -> None:
    width = max(len(name) for name in EXPERIMENTS)
    for name, spec in EXPERIMENTS.items():
        print(f"{name:<{width}}  {spec.summary}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.list:
        _print_listing()
        return 0

    try:
        if args.experiment == "validate":
            if not args.config:
                raise ConfigError("'validate' needs --config FILE")
            raw = load_config_file(args.config)
            cfg = resolve_config(raw, experiment=args.experiment_flag)
            print(f"ok: {cfg.experiment} -> {cfg.output_dir} "
                  f"[{','.join(cfg.formats)}]")
            return 0
        raw = load_config_file(args.config) if args.config else {}
        name = args.experiment if args.experiment else args.experiment_flag
        cfg = resolve_config(raw, experiment=name, output_dir=args.out,
                             formats=args.format, rng_seed=args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    try:
        result = run_experiment(cfg)
    except Exception as exc:  # numerical failures surface verbatim
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2

    for line in result.lines:
        print(line)
    for name in result.artifacts:
        print(result.output_dir / name)
    if result.payload is not None and not result.payload.get("all_passed",
                                                             True):
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
