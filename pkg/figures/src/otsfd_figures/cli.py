"""Command line: `figures <plot-kind> <csv...> -o <png>`."""

import argparse
import sys

from .csvdata import CsvFormatError, read_series
from .plots import plot_convergence, plot_timing


def build_parser():
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render convergence / timing figures from harness CSVs.",
    )
    parser.add_argument("plot_kind", choices=("convergence", "timing"))
    parser.add_argument("csvs", nargs="+", metavar="csv")
    parser.add_argument("-o", "--out", required=True, help="output PNG path")
    parser.add_argument("--title", default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        series = read_series(args.csvs)
    except (OSError, CsvFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    plot = plot_convergence if args.plot_kind == "convergence" else plot_timing
    plot(series, args.out, title=args.title)
    print(f"wrote {args.out} ({len(series)} series)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
