"""Command line entry: render a metrics CSV to an image file.

Exit codes: 0 success, 2 input problem (missing columns, malformed or
empty data), 1 runtime failure.  On success prints the plotted point
count, which must equal the number of CSV data rows.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional

from .io import PlotError, load_rows
from .lines import render_lines
from .ternary import render_ternary


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdba-plot", description="Render qdba metrics CSVs."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ternary = sub.add_parser("ternary", help="Pauli-simplex heatmap")
    ternary.add_argument("--csv", required=True)
    ternary.add_argument("--metric", default="lieutenant_error_rate")
    ternary.add_argument("--out", required=True)
    ternary.add_argument("--title", default="")

    lines = sub.add_parser("lines", help="sweep line plot")
    lines.add_argument("--csv", required=True)
    lines.add_argument("--x", required=True, help="x-axis column, e.g. m")
    lines.add_argument("--metric", default="lieutenant_error_rate")
    lines.add_argument("--group", default=None, help="one curve per value, e.g. t")
    lines.add_argument("--out", required=True)
    lines.add_argument("--title", default="")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "ternary":
            plotted = render_ternary(args.csv, args.metric, args.out, args.title)
            expected = len(load_rows(args.csv, ()))
        else:
            plotted = render_lines(
                args.csv, args.x, args.metric, args.out, args.group, args.title
            )
            expected = len(load_rows(args.csv, ()))
        if plotted != expected:
            raise PlotError(
                f"plotted {plotted} points but the CSV has {expected} rows"
            )
    except PlotError as exc:
        print(f"plot error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - surface anything as exit 1
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"plotted {plotted} points to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
