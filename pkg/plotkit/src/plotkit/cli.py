"""Standalone figure generator for benchmark CSVs."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureError, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plotkit")
    parser.add_argument("--csv", required=True, help="harness results CSV")
    parser.add_argument("--kind", required=True,
                        choices=("sweep", "ranked_bar", "runtime"))
    parser.add_argument("--out-dir", default=".")
    parser.add_argument("--family", help="filter rows to one graph family")
    parser.add_argument("--param", help="sweep/runtime x-axis parameter key")
    parser.add_argument("--value",
                        help="parameter value selecting a ranked_bar point")
    parser.add_argument("--log-y", action="store_true")
    parser.add_argument("--format", default="png", choices=("png", "svg"))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(csv_path=args.csv, kind=args.kind, out_dir=args.out_dir,
                      family=args.family, param=args.param, value=args.value,
                      log_y=args.log_y, image_format=args.format)
    try:
        path = render(spec)
    except (FigureError, OSError) as exc:
        print(str(exc), file=sys.stderr)
        return 2
    print(path)
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
