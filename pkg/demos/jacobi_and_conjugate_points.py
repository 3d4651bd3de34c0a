"""Propagate Jacobi fields and hunt for conjugate points.

Jacobi fields measure how a spray of nearby geodesics spreads.  Along a
unit spacelike geodesic of the Lorentzian half plane the normal component
oscillates like sin(t); along a timelike one it grows like sinh(t); and on
the pseudosphere chart (curvature +1 directions) the oscillation closes up
into a conjugate point at t = pi.  The half-plane model has no conjugate
points at all inside (0, pi).

Run:  python3 demos/jacobi_and_conjugate_points.py
"""

from __future__ import annotations

import math

import numpy as np

from affinesurf.catalog import get_model
from affinesurf.jacobi import conjugate_points, integrate_jacobi


def main() -> None:
    l2 = get_model("L2").field
    pseudo = get_model("pseudosphere").field

    print("Jacobi components against their closed forms")
    print("=" * 55)
    sol = integrate_jacobi(l2, (1.0, 0.0), (0.0, 1.0), (0.0, 0.0), (1.0, 0.0), 1.45)
    gap = np.max(np.abs(sol.a[:, 0] - np.sin(sol.t)))
    print(f"   spacelike, normal seed:   a1(t) vs sin(t),  max gap {gap:.1e}")

    r2 = math.sqrt(2.0)
    sol = integrate_jacobi(l2, (1.0, 0.0), (r2, 1.0), (0.0, 0.0), (1.0, r2), 2.0)
    want = np.outer(np.sinh(sol.t), (1.0, r2))
    gap = np.max(np.abs(sol.a - want))
    print(f"   timelike,  normal seed:   a(t) vs sinh(t)*w, max gap {gap:.1e}")
    print(f"   (geodesic leaves the chart at t = {sol.t_escape:.6f}; "
          f"asinh(1) = {math.asinh(1.0):.6f})")
    print()

    print("conjugate point scan")
    print("=" * 55)
    hits = conjugate_points(pseudo, (0.0, 0.0), (0.0, 1.0), 3.5)
    print(f"   pseudosphere meridian: first conjugate point at "
          f"t = {hits[0]:.9f} (pi = {math.pi:.9f})")
    for v in ((0.0, 1.0), (r2, 1.0), (1.0, 1.0)):
        hits = conjugate_points(l2, (1.0, 0.0), v, math.pi - 1e-3)
        print(f"   half plane, v = {v}: {len(hits)} conjugate points in (0, pi)")


if __name__ == "__main__":
    main()
