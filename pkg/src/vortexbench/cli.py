"""Command-line entry point: ``vortexbench simulate`` and ``vortexbench selftest``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, bench
from .errors import VortexBenchError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vortexbench",
        description="Simulate spin-orbit beam transformations from bench scripts.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="run a bench script and emit its report")
    simulate.add_argument("script", type=Path, help="bench-script file")
    simulate.add_argument(
        "--out-dir", type=Path, default=Path("."), help="directory for images and CSV exports"
    )
    simulate.add_argument(
        "--samples-per-element",
        type=int,
        default=256,
        metavar="N",
        help="trajectory sampling density when the directive omits samples=",
    )
    simulate.add_argument(
        "--report", type=Path, default=None, help="write the JSON report here instead of stdout"
    )

    sub.add_parser("selftest", help="run the built-in acceptance checks")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "selftest":
        from .selftest import run_all

        results = run_all(verbose=True)
        return 0 if all(r.passed for r in results) else 1

    try:
        text = args.script.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {args.script}: {exc}", file=sys.stderr)
        return 1
    try:
        script = bench.parse(text)
        report = bench.run(
            script, out_dir=args.out_dir, samples_default=args.samples_per_element
        )
    except (VortexBenchError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    rendered = bench.format_report(report)
    if args.report is not None:
        args.report.parent.mkdir(parents=True, exist_ok=True)
        args.report.write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
