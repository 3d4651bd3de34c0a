"""Survey geodesic completeness across the model catalog.

A handful of integrations per model is enough to see the split: some
homogeneous surfaces carry every geodesic to infinite affine time, others
push geodesics off the chart (or to infinity) in finite time.  The escape
detector reports the blowup time, which this script compares against the
known closed-form values where one exists.

Run:  python3 demos/completeness_survey.py
"""

from __future__ import annotations

import math

import numpy as np

from affinesurf.catalog import parse_model_spec
from affinesurf.geodesics import integrate_geodesic

SPAN = (-50.0, 50.0)


def status_of(traj) -> str:
    back, fwd = traj.status_backward, traj.status_forward
    if traj.complete:
        return "complete both ways"
    parts = []
    if back != "complete":
        parts.append(f"backward {back} at t={traj.t_escape_backward:.4f}")
    if fwd != "complete":
        parts.append(f"forward {fwd} at t={traj.t_escape_forward:.4f}")
    return ", ".join(parts)


def main() -> None:
    print("completeness survey, |t| <= 50")
    print("=" * 60)

    rng = np.random.default_rng(11)
    for spec in ("S2", "S3~", "S4:c=3/4", "S5", "H2"):
        field = parse_model_spec(spec).field
        base = (1.0, 0.0) if field.kind == "B" else (0.0, 0.0)
        worst = "complete both ways"
        for _ in range(5):
            v = rng.uniform(-1.0, 1.0, size=2)
            traj = integrate_geodesic(field, base, tuple(v), SPAN, samples=11)
            if not traj.complete:
                worst = status_of(traj)
        print(f"{spec:>8}: {worst}")
    print()

    print("incomplete models and their escape schedules")
    s1 = parse_model_spec("S1").field
    traj = integrate_geodesic(s1, (0.0, 0.0), (2.0, 0.0), SPAN, samples=11)
    print(f"      S1: launch (2,0) -> {status_of(traj)}  (closed form: 1/v1 = 0.5)")

    s3 = parse_model_spec("S3").field
    traj = integrate_geodesic(s3, (0.0, 0.0), (0.0, 1.0), SPAN, samples=11)
    print(f"      S3: launch (0,1) -> {status_of(traj)}  "
          f"(closed form: pi/2 = {math.pi / 2:.4f})")
    traj = integrate_geodesic(s3, (0.0, 0.0), (1.0, 0.7), (-40.0, 40.0),
                              samples=401)
    print(f"      S3: generic launch stays in the strip |x2| < pi "
          f"(max |x2| = {np.max(np.abs(traj.x[:, 1])):.4f})")

    l2 = parse_model_spec("L2").field
    traj = integrate_geodesic(l2, (1.0, 0.0), (1.0, 1.0), SPAN, samples=11)
    print(f"      L2: null launch (1,1) -> {status_of(traj)}  "
          "(reaches the chart edge at t = 1, past-complete)")


if __name__ == "__main__":
    main()
