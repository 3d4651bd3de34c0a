"""Geodesic initial value problems for connection charts.

The geodesic system is integrated in first-order form y = (x1, x2, v1, v2)
with y' = (v, -G(v, v)) where G is the pointwise connection table.  A
trajectory that cannot be continued to the requested parameter bound is
reported with a finite escape-time estimate; completeness probes are built
on top of that diagnosis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .errors import InvalidIVPError
from .fields import KIND_B, ChristoffelField, Point2, christoffel_at
from .integrate import IntegrationResult, solve_ode

__all__ = [
    "GeodesicTrajectory",
    "Incomplete",
    "geodesic_rhs",
    "integrate_geodesic",
    "exp_map",
    "write_trajectory_csv",
]

COMPLETE = "complete"
NOT_REQUESTED = "not_requested"


def geodesic_rhs(field: ChristoffelField) -> Callable:
    """Right-hand side (v, -G(v, v)) of the first-order geodesic system."""

    def f(t, y):
        g = christoffel_at(field, (y[0], y[1]))
        v = y[2:4]
        acc = -np.einsum("ijk,i,j->k", g, v, v)
        return np.array([y[2], y[3], acc[0], acc[1]])

    return f


def _check_ivp(field: ChristoffelField, point, velocity):
    p = tuple(float(c) for c in point)
    v = tuple(float(c) for c in velocity)
    if len(p) != 2 or len(v) != 2:
        raise InvalidIVPError("point and velocity must have two components")
    if not all(math.isfinite(c) for c in p + v):
        raise InvalidIVPError("point and velocity must be finite")
    if not field.contains(p):
        raise InvalidIVPError(
            f"initial point {p} lies outside the chart of the field"
        )
    return p, v


def _status_of(field: ChristoffelField, res: IntegrationResult) -> str:
    if res.status == "reached":
        return COMPLETE
    if res.status == "stalled" and field.kind == KIND_B and res.ys[-1][0] < 1e-6:
        # steps collapsed against the x1 = 0 chart boundary
        return "left_chart"
    return res.status


@dataclass
class GeodesicTrajectory:
    """Sampled geodesic over [t_min, t_max] with per-direction diagnosis.

    Samples are ascending in t and cover only the reachable part of the
    requested window.  ``status_*`` is ``"complete"`` when the corresponding
    bound was reached, otherwise ``"blowup"``, ``"left_chart"`` or
    ``"stalled"`` with the matching escape-time estimate.
    """

    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    status_forward: str
    status_backward: str
    t_escape_forward: float | None = None
    t_escape_backward: float | None = None
    result_forward: IntegrationResult | None = dc_field(default=None, repr=False)
    result_backward: IntegrationResult | None = dc_field(default=None, repr=False)

    @property
    def complete(self) -> bool:
        done_f = self.status_forward in (COMPLETE, NOT_REQUESTED)
        done_b = self.status_backward in (COMPLETE, NOT_REQUESTED)
        return done_f and done_b


def _normalize_span(t_span) -> tuple[float, float]:
    if np.isscalar(t_span):
        hi = float(t_span)
        if hi <= 0:
            raise InvalidIVPError("scalar time bound must be positive")
        return (0.0, hi)
    lo, hi = (float(v) for v in t_span)
    if lo > 0.0 or hi < 0.0 or lo == hi:
        raise InvalidIVPError("time window must contain 0 with t_min <= 0 <= t_max")
    return (lo, hi)


def integrate_geodesic(
    field: ChristoffelField,
    point,
    velocity,
    t_span,
    *,
    samples: int = 201,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    max_step: float = math.inf,
    chart_floor: float = 0.0,
    max_steps: int = 500_000,
) -> GeodesicTrajectory:
    """Integrate a geodesic across a window [t_min, t_max] containing 0.

    ``chart_floor`` > 0 stops kind-B trajectories with status
    ``"left_chart"`` once x1 drops to the floor; the default 0 lets the
    integrator run until the boundary actually starves the steps.
    """
    p, v = _check_ivp(field, point, velocity)
    lo, hi = _normalize_span(t_span)
    if samples < 2:
        raise InvalidIVPError("need at least two sample times")
    rhs = geodesic_rhs(field)
    y0 = np.array([p[0], p[1], v[0], v[1]])

    guard = None
    if chart_floor > 0.0 and field.kind == KIND_B:
        guard = lambda t, y: "left_chart" if y[0] <= chart_floor else None

    grid = np.linspace(lo, hi, samples)

    def run(t_end, t_eval):
        return solve_ode(
            rhs,
            0.0,
            y0,
            t_end,
            rtol=rtol,
            atol=atol,
            max_step=max_step,
            t_eval=t_eval,
            guard=guard,
            max_steps=max_steps,
        )

    status_f = status_b = NOT_REQUESTED
    esc_f = esc_b = None
    res_f = res_b = None
    parts_t: list[np.ndarray] = []
    parts_y: list[np.ndarray] = []

    if lo < 0.0:
        back_eval = [t for t in grid[::-1] if t <= 0.0]
        res_b = run(lo, back_eval)
        status_b = _status_of(field, res_b)
        esc_b = res_b.t_escape
        parts_t.append(res_b.sample_ts[::-1])
        parts_y.append(res_b.sample_ys[::-1])
    if hi > 0.0:
        fwd_eval = [t for t in grid if t >= 0.0]
        if not fwd_eval or fwd_eval[0] != 0.0:
            fwd_eval = [0.0] + fwd_eval
        res_f = run(hi, fwd_eval)
        status_f = _status_of(field, res_f)
        esc_f = res_f.t_escape
        start = 1 if parts_t and parts_t[-1].size and parts_t[-1][-1] == 0.0 else 0
        parts_t.append(res_f.sample_ts[start:])
        parts_y.append(res_f.sample_ys[start:])

    ts = np.concatenate(parts_t)
    ys = np.concatenate(parts_y)
    return GeodesicTrajectory(
        t=ts,
        x=ys[:, 0:2],
        v=ys[:, 2:4],
        status_forward=status_f,
        status_backward=status_b,
        t_escape_forward=esc_f,
        t_escape_backward=esc_b,
        result_forward=res_f,
        result_backward=res_b,
    )


@dataclass(frozen=True)
class Incomplete:
    """Marker returned by exp_map when the unit-time geodesic breaks down."""

    status: str
    t_escape: float | None


def exp_map(
    field: ChristoffelField,
    point,
    velocity,
    *,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    chart_floor: float = 0.0,
    max_steps: int = 500_000,
) -> Point2 | Incomplete:
    """Exponential map: follow the geodesic for unit parameter time.

    Returns the endpoint, or an Incomplete marker carrying the breakdown
    diagnosis and escape-time estimate when the geodesic does not extend to
    parameter 1.
    """
    p, v = _check_ivp(field, point, velocity)
    if v == (0.0, 0.0):
        return Point2(p[0], p[1])
    guard = None
    if chart_floor > 0.0 and field.kind == KIND_B:
        guard = lambda t, y: "left_chart" if y[0] <= chart_floor else None
    res = solve_ode(
        geodesic_rhs(field),
        0.0,
        np.array([p[0], p[1], v[0], v[1]]),
        1.0,
        rtol=rtol,
        atol=atol,
        guard=guard,
        max_steps=max_steps,
    )
    status = _status_of(field, res)
    if status == COMPLETE:
        yf = res.ys[-1]
        return Point2(float(yf[0]), float(yf[1]))
    return Incomplete(status=status, t_escape=res.t_escape)


def write_trajectory_csv(traj: GeodesicTrajectory, path) -> None:
    """Write samples as CSV with full float precision (17 significant digits)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,x1,x2,v1,v2\n")
        for i in range(traj.t.shape[0]):
            row = (traj.t[i], traj.x[i, 0], traj.x[i, 1], traj.v[i, 0], traj.v[i, 1])
            fh.write(",".join(f"{val:.17g}" for val in row) + "\n")
