"""Command-line wrapper: nkcontours <summary.csv> [-o OUTDIR] [--format png|svg]."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .contours import MissingCellsError, render_contours


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="nkcontours",
        description="Render per-p contour panels from a sweep summary CSV.",
    )
    parser.add_argument("summary", type=Path, help="summary.csv written by the sweep driver")
    parser.add_argument("-o", "--outdir", type=Path, default=Path("plots"))
    parser.add_argument("--format", choices=("png", "svg"), default="png")
    args = parser.parse_args(argv)

    try:
        written = render_contours(args.summary, args.outdir, args.format)
    except FileNotFoundError:
        print(f"error: no such file: {args.summary}", file=sys.stderr)
        return 2
    except (MissingCellsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
