"""
Command-line front end.

    qwork twolevel populations --profile fig2 --out fig2.csv
    qwork vibronic work --profile fig6 --override T=300 --format json
    qwork selftest

Exit status: 0 success, 1 I/O failure, 2 invalid configuration,
3 numerical-contract violation.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

from . import selftest
from .config import PROFILES, ConfigError, load
from .experiments import COMMANDS
from .io import emit
from .numerics import NumericalContractError

EXIT_IO, EXIT_CONFIG, EXIT_NUMERIC = 1, 2, 3


def worker_count() -> int:
    cap = os.environ.get("QWORK_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", metavar="PATH", help="TOML experiment file")
    p.add_argument("--override", metavar="KEY=VAL", action="append", default=[],
                   help="dotted-key override, e.g. atom.rabi=0.25 (repeatable)")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default: csv)")
    p.add_argument("--out", metavar="PATH", help="result file (default: <model>_<action>.<format>)")
    p.add_argument("--profile", choices=sorted(PROFILES), help="figure preset")
    p.add_argument("--steps", type=int, metavar="N", help="propagation steps (overrides numerics.steps)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwork", description=__doc__.split("\n\n")[0].strip())
    groups = parser.add_subparsers(dest="model", required=True)
    actions: dict[str, list[str]] = {}
    for model, action in COMMANDS:
        actions.setdefault(model, []).append(action)
    for model, names in actions.items():
        sub = groups.add_parser(model).add_subparsers(dest="action", required=True)
        for name in names:
            _common(sub.add_parser(name))
    groups.add_parser("selftest", help="run the invariant checks")
    return parser


def run(args: argparse.Namespace) -> int:
    if args.model == "selftest":
        return 0 if selftest.run() else EXIT_NUMERIC
    overrides = list(args.override)
    if args.steps is not None:
        overrides.append(f"numerics.steps={args.steps}")
    if args.format:
        overrides.append(f'output.format="{args.format}"')
    try:
        cfg = load(args.config, overrides, args.profile)
        if cfg.model and cfg.model != args.model:
            raise ConfigError("model", f"configuration is for {cfg.model!r}, command is {args.model!r}")
        result = COMMANDS[(args.model, args.action)](cfg, workers=worker_count())
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalContractError as exc:
        print(f"numerical contract violated: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO

    out = args.out or cfg.out_path or f"{args.model}_{args.action.replace('-', '_')}.{cfg.out_format}"
    try:
        emit(result, cfg.out_format, out)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(out)
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    return run(build_parser().parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
