"""CLI: figures --input agg.csv --which quality|tau --ell 0,0.1,0.5,1 --out fig.svg"""

from __future__ import annotations

import argparse
import sys

from .plots import FigureInputError, FigureSpec, plot_quality, plot_tau


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Regenerate quality / discriminative-power figures "
                    "from an aggregated sweep CSV.",
    )
    parser.add_argument("--input", required=True, help="aggregated sweep CSV")
    parser.add_argument("--which", required=True, choices=["quality", "tau"])
    parser.add_argument("--ell", default="0,0.1,0.5,1",
                        help="comma-separated learning probabilities to plot")
    parser.add_argument("--out", required=True, help="output image path (SVG)")
    parser.add_argument("--x-label", default="friction probability f")
    parser.add_argument("--y-label", default=None)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        ell_values = [float(v) for v in args.ell.split(",") if v.strip() != ""]
    except ValueError as exc:
        print(f"error: bad --ell list: {exc}", file=sys.stderr)
        return 1
    spec = FigureSpec(input_csv=args.input, output_path=args.out,
                      ell_values=ell_values, x_label=args.x_label,
                      y_label=args.y_label)
    try:
        path = plot_quality(spec) if args.which == "quality" else plot_tau(spec)
    except FigureInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
