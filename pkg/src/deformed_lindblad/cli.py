"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 numerical-invariant breach.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .cli_selftest import run_selftest
from .dissipator import IntegrationError
from .phasespace import BesselAccuracyError
from .runner import ConfigError, parse_config, run_scenario, write_outputs

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deformed-lindblad",
        description="Damped Morse-like oscillator: evolution and phase-space outputs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario from a config file")
    run.add_argument("--config", required=True, help="flat key = value config file")
    run.add_argument("--output-dir", default=None, help="override output directory")
    run.add_argument("--scenario", default=None, help="override the scenario name")

    sub.add_parser("selftest", help="run the fast numerical invariant suite")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "selftest":
        ok = run_selftest()
        return EXIT_OK if ok else EXIT_NUMERICAL

    try:
        source = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        config = parse_config(source)
        if args.scenario is not None:
            config = replace(config, scenario=args.scenario)
            config.validate()
        if args.output_dir is not None:
            config = replace(config, output_dir=args.output_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        result = run_scenario(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegrationError, BesselAccuracyError, ValueError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    manifest = write_outputs(result, config.output_dir)
    for name, size in manifest:
        print(f"{name}  {size} bytes")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
