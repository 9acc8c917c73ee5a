"""Command-line entry point.

Subcommands: optimize, vqe, saoo, compare, scan.  Configuration comes from a
flat key=value file (--config); --seeds and --mode override the file.  Exit
codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

from . import bench
from .bench import UsageError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="devqe",
        description="Differential-evolution and ensemble-VQE benchmark harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("optimize", "minimize a built-in test function over multiple seeds"),
        ("vqe", "single fixed-orbital ensemble VQE run on a molecule"),
        ("saoo", "single orbital-optimized ensemble VQE run on a molecule"),
        ("compare", "multi-seed optimizer comparison with summary statistics"),
        ("scan", "1-D energy scan over a directory of FCIDUMP files"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="key=value config file")
        cmd.add_argument("--out", default="out", help="output directory")
        cmd.add_argument("--seeds", default=None, help="comma-separated seed list")
        if name == "scan":
            cmd.add_argument("--mode", choices=("savqe", "saoo"), default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    try:
        config = bench.parse_config(args.config)
        if args.seeds is not None:
            config["seeds"] = args.seeds
        if args.command == "optimize":
            path = bench.cmd_optimize(config, args.out)
        elif args.command == "vqe":
            path = bench.cmd_single(config, args.out, "savqe")
        elif args.command == "saoo":
            path = bench.cmd_single(config, args.out, "saoo")
        elif args.command == "compare":
            path = bench.cmd_compare(config, args.out)
        else:
            path = bench.cmd_scan(config, args.out, getattr(args, "mode", None))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 1

    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
