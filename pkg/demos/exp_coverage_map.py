"""Map which chart cells the exponential map at a point can reach.

On the Lorentzian half plane the image of exp at P = (1, 0) misses the
solid wedge |x2| >= 1 + x1: geodesics through P simply never enter it.
This script builds the three-valued coverage map (unreached / reached /
unknown), prints the tallies, and writes an SVG picture where the wedge
shows up as the dark unreached region.

Run:  python3 demos/exp_coverage_map.py [--out cover.svg]
"""

from __future__ import annotations

import argparse

from affinesurf.catalog import get_model
from affinesurf.coverage import exp_coverage
from affinesurf.svg import coverage_svg

WINDOW = (0.0, 4.0, -4.0, 4.0)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=None, help="write an SVG map here")
    parser.add_argument("--cells", type=int, default=60)
    args = parser.parse_args()

    field = get_model("L2").field
    cover = exp_coverage(field, (1.0, 0.0), WINDOW, args.cells)
    counts = cover.counts()
    total = sum(counts.values())

    print(f"coverage of exp at (1, 0) over window {WINDOW}, "
          f"{args.cells}x{args.cells} cells")
    for key in ("reached", "unreached", "unknown"):
        print(f"   {key:>10}: {counts[key]:>5}  "
              f"({100.0 * counts[key] / total:.1f}%)")

    # spot checks: the wedge cell is provably out of reach, the diagonal
    # neighbour well inside the complement is hit
    print(f"   cell at (0.5, 3.0): {cover.value_at(0.5, 3.0)}  (0 = unreached)")
    print(f"   cell at (2.0, 0.5): {cover.value_at(2.0, 0.5)}  (1 = reached)")

    if args.out:
        svg = coverage_svg(cover)
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(svg)
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
