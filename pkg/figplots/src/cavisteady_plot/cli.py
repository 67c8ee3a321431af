"""Command line: render a preset figure from a scan CSV.

    cavisteady-plot --csv fig1ab_scan.csv --preset fig1ab --out fig1ab.png
"""

from __future__ import annotations

import argparse
import sys

from .errors import EmptySeries, MissingColumn
from .presets import PRESETS, preset_spec
from .render import render_figure


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="cavisteady-plot")
    parser.add_argument("--csv", required=True, help="scan CSV produced by cavisteady")
    parser.add_argument("--preset", required=True, choices=sorted(PRESETS))
    parser.add_argument("--out", required=True, help="output image (.png or .svg)")
    parser.add_argument(
        "--u",
        type=float,
        default=6.0,
        help="interaction strength setting the resonance markers of fig1cd",
    )
    args = parser.parse_args(argv)
    try:
        render_figure(preset_spec(args.preset, args.csv, args.out, u=args.u))
    except (EmptySeries, MissingColumn, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
