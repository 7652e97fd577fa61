"""Lattice versus continuum parallel-connection probability on a rectangle.

Prints the table as CSV and, with ``--plot-data``, also writes the
per-point discretization used at each spacing.

    python3 scripts/convergence_study.py --eps 1/8,1/12,1/16,1/20
"""

import argparse
import csv
import sys
from fractions import Fraction

from planar_ising.scaling import (EPS_LADDER, SQUARE_K2_A, SQUARE_K2_B, LatticeApprox, RectDomain,
                                  convergence_study)


def parse_points(text):
    return tuple(complex(*map(float, p.split(","))) for p in text.split(";"))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--width", type=float, default=1.0)
    ap.add_argument("--height", type=float, default=1.0)
    ap.add_argument("--eps", default=",".join(str(Fraction(e).limit_denominator(100)) for e in EPS_LADDER))
    ap.add_argument("--points-a", type=parse_points, default=SQUARE_K2_A)
    ap.add_argument("--points-b", type=parse_points, default=SQUARE_K2_B)
    ap.add_argument("--plot-data", help="CSV of lattice sites chosen for each marked point")
    args = ap.parse_args()
    d = RectDomain(args.width, args.height)
    eps = [float(Fraction(t)) for t in args.eps.split(",")]
    table = convergence_study(d, args.points_a, args.points_b, eps)
    sys.stdout.write(table.to_csv())
    if args.plot_data:
        with open(args.plot_data, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["eps", "role", "x", "y", "site_x", "site_y"])
            for e in eps:
                lat = LatticeApprox.of(d, e)
                for role, pts in (("a", args.points_a), ("b", args.points_b)):
                    for z in pts:
                        sx, sy = lat.position(lat.nearest(z))
                        w.writerow([e, role, z.real, z.imag, sx, sy])
    print(f"gap non-increasing: {table.non_increasing}", file=sys.stderr)
    return 0 if table.non_increasing else 1


if __name__ == "__main__":
    raise SystemExit(main())
