"""Verify that null-spray charts flatten the induced metric to (t^2, 1, 0).

A null spray follows a base geodesic sigma(s) and shoots a parallel null
field xi off it: (s, t) -> (point t along the null geodesic from sigma(s)).
When sigma is unit and non-null and xi is suitably normalised, the pulled
back metric collapses to g_ss = t^2, g_st = 1, g_tt = 0 in every case the
package knows: two closed-form charts (one into Minkowski 3-space, one
inside the half plane), numerically built sprays, and two "spine" charts
whose first fundamental forms are cosh^2(t) and -cos^2(t) instead.

Run:  python3 demos/spray_normal_forms.py
"""

from __future__ import annotations

import numpy as np

from affinesurf.sprays import (
    map_T_L2,
    map_T_S2,
    spine_sprays,
    spray_metric,
    spray_metric_grid,
    tl2_grid,
    ts2_grid,
    verify_isometry,
)


def main() -> None:
    print("closed-form chart defects against the (t^2, 1, 0) normal form")
    print("=" * 62)
    rep = verify_isometry(map_T_S2, "minkowski", ts2_grid(41), label="surface")
    print(f"   surface chart (41x41):    max defect {rep.max_defect:.2e}")
    rep = verify_isometry(map_T_L2, "L2", tl2_grid(41), label="half-plane")
    print(f"   half-plane chart (41x41): max defect {rep.max_defect:.2e}")

    # the same normal form emerges from a spray built by pure integration:
    # base null geodesic s -> (1/s, 1/s) with parallel seed (1/2, -1/2)
    from affinesurf.sprays import build_spray

    base = (
        lambda s: np.array([1.0 / s, 1.0 / s]),
        lambda s: np.array([-1.0 / s**2, -1.0 / s**2]),
    )
    chart = build_spray("L2", base, (0.5, -0.5), (0.5, 2.0))
    s_vals = np.linspace(0.7, 1.6, 4)
    t_vals = np.linspace(-0.8, 0.8, 5)
    grid = spray_metric_grid(chart, s_vals, t_vals)
    want = np.stack(
        np.broadcast_arrays(
            np.asarray(t_vals)[None, :] ** 2,
            1.0,
            0.0,
        ),
        axis=-1,
    )
    print(f"   numeric spray (4x5 grid): max defect "
          f"{np.max(np.abs(grid - want)):.2e}")
    print()

    print("spine charts: predicted first fundamental forms")
    print("=" * 62)
    for kind, (s, t) in (("vertical", (0.2, 0.7)), ("horizontal", (0.9, 0.3))):
        chart = spine_sprays(kind)
        got = spray_metric(chart, s, t)
        want = chart.expected_form(s, t)
        print(f"   {kind:>10} at (s, t) = ({s}, {t}):")
        print(f"      got      ({got[0]: .8f}, {got[1]: .8f}, {got[2]: .8f})")
        print(f"      expected ({want[0]: .8f}, {want[1]: .8f}, {want[2]: .8f})")


if __name__ == "__main__":
    main()
