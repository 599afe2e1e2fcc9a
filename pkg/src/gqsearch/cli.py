"""Command line entry point.

    gqsearch run --config experiment.ini [--seed N] [--out PATH] [--format csv|json]
    gqsearch sweep --config sweep.ini [--seed N] [--out PATH] [--format csv|json]
    gqsearch validate

Exit codes: 0 success, 1 configuration problem, 2 numerical validation
failure.
"""

from __future__ import annotations

import argparse
import sys

from .harness import ConfigError, emit_report, load_config, load_sweep_configs
from .harness import run_experiment, run_validation
from .linalg import DenseCapError, DimensionError, EigensolverError
from .spectra import ResonanceError, SpectrumValidationError


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; route through ConfigError
    # instead so usage problems land on exit code 1
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="gqsearch", description=__doc__)
    sub = parser.add_subparsers(dest="command")
    for name, helptext in (
        ("run", "execute one configured experiment"),
        ("sweep", "expand comma lists in the config and run the product"),
    ):
        cmd = sub.add_parser(name, help=helptext)
        cmd.add_argument("--config", required=True, help="path to an ini config")
        cmd.add_argument("--seed", type=int, default=None, help="override seed")
        cmd.add_argument("--out", default=None, help="override output path")
        cmd.add_argument(
            "--format", choices=("csv", "json"), default=None, help="override format"
        )
    sub.add_parser("validate", help="run the numerical invariant suite")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise ConfigError("a command is required: run, sweep, or validate")
        if args.command == "validate":
            return 0 if run_validation() else 2

        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.out is not None:
            overrides["out"] = args.out
        if args.format is not None:
            overrides["fmt"] = args.format
        if args.command == "run":
            configs = [load_config(args.config, **overrides)]
        else:
            configs = load_sweep_configs(args.config, **overrides)

        rows = []
        for config in configs:
            rows.extend(run_experiment(config))
        fmt = configs[0].fmt
        out = configs[0].out or f"report.{fmt}"
        emit_report(rows, fmt, out)
        print(f"wrote {len(rows)} row(s) to {out}")
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (SpectrumValidationError, ResonanceError, EigensolverError) as exc:
        print(f"numerical validation failure: {exc}", file=sys.stderr)
        return 2
    except (DimensionError, DenseCapError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
