"""Command-line interface: figures gap|tte --in PATH [--kind surface|slice] --out PATH.

Exit codes: 0 success, 1 validation/schema error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .render import render_gap_figure, render_tte_figure


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="figures", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gap", help="median gap curves with q10-q90 bands")
    p.add_argument("--in", dest="infile", required=True, help="summary.csv")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--linear-y", action="store_true", help="disable the log y-axis")

    p = sub.add_parser("tte", help="median time-to-accuracy plot")
    p.add_argument("--in", dest="infile", required=True, help="tte.csv")
    p.add_argument("--kind", choices=["surface", "slice"], default="slice")
    p.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "gap":
            render_gap_figure(args.infile, args.out, log_y=not args.linear_y)
        else:
            render_tte_figure(args.infile, args.kind, args.out)
    except ValueError as exc:
        print(f"figures: validation error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"figures: I/O error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
