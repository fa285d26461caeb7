"""Command-line entry point.

    epistral-sim run SCENARIO [--out PATH] [--format csv|jsonl]
                              [--seed N] [--ticks N] [--scale FACTOR]
    epistral-sim validate SCENARIO
    epistral-sim hash SCENARIO [--seed N] [--ticks N] [--scale FACTOR]

Exit codes: 0 on success, 2 for scenario parse or validation errors, 3 for
runtime failures.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Optional, Sequence

from .engine import Simulation
from .errors import ParseError, ValidationError
from .metrics import write_csv, write_jsonl
from .scenario import ScenarioConfig, load_scenario


def _add_overrides(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None,
                        help="override the scenario seed")
    parser.add_argument("--ticks", type=int, default=None,
                        help="override the number of ticks")
    parser.add_argument("--scale", type=float, default=None,
                        help="divide every agent count by this factor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epistral-sim",
        description="Deterministic scenario simulator for the Epistral "
                    "protocol",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario and print the final "
                                     "state hash")
    run.add_argument("scenario", help="path to a scenario JSON file")
    run.add_argument("--out", default=None,
                     help="write the per-tick metric trace to this path")
    run.add_argument("--format", choices=("csv", "jsonl"), default="csv",
                     help="trace output format (default csv)")
    _add_overrides(run)

    validate = sub.add_parser("validate", help="check a scenario file")
    validate.add_argument("scenario", help="path to a scenario JSON file")

    hash_cmd = sub.add_parser("hash", help="run a scenario and print only "
                                           "the final state hash")
    hash_cmd.add_argument("scenario", help="path to a scenario JSON file")
    _add_overrides(hash_cmd)

    return parser


def _load_config(args) -> ScenarioConfig:
    config = load_scenario(args.scenario)
    seed = getattr(args, "seed", None)
    if seed is not None:
        if not 0 <= seed < 2 ** 64:
            raise ValidationError("seed", "must fit in an unsigned 64-bit "
                                          "integer")
        config = replace(config, seed=seed)
    ticks = getattr(args, "ticks", None)
    if ticks is not None:
        if ticks < 0:
            raise ValidationError("ticks", "must be non-negative")
        config = replace(config, ticks=ticks)
    scale = getattr(args, "scale", None)
    if scale is not None:
        if scale < 1:
            raise ValidationError("scale", "must be >= 1")
        config = config.scaled(scale)
    return config


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        config = _load_config(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.command == "validate":
        print("OK")
        return 0

    try:
        trace = Simulation(config).run()
        if args.command == "run" and args.out:
            if args.format == "jsonl":
                write_jsonl(trace.records, args.out)
            else:
                write_csv(trace.records, args.out)
    except Exception as exc:  # noqa: BLE001  (CLI boundary)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3

    print(trace.final_hash)
    return 0


if __name__ == "__main__":
    sys.exit(main())
