"""Jacobi fields along geodesics and conjugate-point location.

A Jacobi field J along a geodesic sigma satisfies the second-order system
nabla^2 J + R(J, sigma') sigma' = 0.  It is integrated here in a parallel
frame (e1, e2) transported along sigma, so the unknowns are the frame
coefficients a with J = a1 e1 + a2 e2 and the equation becomes

    a''_b = [E^{-1} W]_b,   W = -sum_b a_b R(e_b, sigma') sigma'

with E the chart matrix of the frame.  Conjugate points of sigma(0) are
found from two Jacobi fields with J(0) = 0 and independent initial
derivatives: the parameter values where their coefficient determinant
vanishes again.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .curvature import curvature_at, curvature_table
from .errors import FrameDegenerateError, InvalidIVPError
from .fields import KIND_ANALYTIC, ChristoffelField, christoffel_at
from .geodesics import _check_ivp, _status_of, geodesic_rhs
from .integrate import solve_ode

__all__ = ["JacobiSolution", "integrate_jacobi", "conjugate_points"]


def _fast_tensors(field: ChristoffelField):
    """Pointwise Gamma and curvature evaluators without per-call table work."""
    if field.kind == KIND_ANALYTIC:
        return (
            lambda x: christoffel_at(field, x),
            lambda x: curvature_at(field, x),
        )
    g0 = christoffel_at(field, (1.0, 0.0))
    r_tbl = curvature_table(field)
    r0 = r_tbl.as_array()
    if r_tbl.power == 0:
        return (lambda x: g0, lambda x: r0)

    def gamma(x):
        if x[0] <= 0.0:
            raise ValueError("outside chart")
        return g0 / x[0]

    def curv(x):
        return r0 / x[0] ** 2

    return gamma, curv


def _frame_matrix(y: np.ndarray) -> np.ndarray:
    """Columns e1, e2 of the transported frame from the packed state."""
    return np.array([[y[4], y[6]], [y[5], y[7]]])


def _jacobi_rhs(field: ChristoffelField, n_pairs: int):
    gamma_at, curv_at = _fast_tensors(field)

    def f(t, y):
        x = y[0:2]
        v = y[2:4]
        g = gamma_at(x)
        out = np.empty_like(y)
        out[0:2] = v
        out[2:4] = -np.einsum("ijk,i,j->k", g, v, v)
        # parallel transport of both frame legs
        gv = np.einsum("ijk,i->jk", g, v)  # gv[j, k]
        e1 = y[4:6]
        e2 = y[6:8]
        out[4:6] = -e1 @ gv
        out[6:8] = -e2 @ gv
        emat = _frame_matrix(y)
        det = emat[0, 0] * emat[1, 1] - emat[0, 1] * emat[1, 0]
        if abs(det) < 1e-14:
            raise ValueError("transported frame degenerated")
        inv = np.array([[emat[1, 1], -emat[0, 1]], [-emat[1, 0], emat[0, 0]]]) / det
        r = curv_at(x)
        # rv[i, l] = components of R(d_i, v) v
        rv = np.einsum("ijkl,j,k->il", r, v, v)
        for m in range(n_pairs):
            base = 8 + 4 * m
            a = y[base : base + 2]
            adot = y[base + 2 : base + 4]
            j_chart = emat @ a
            w = -j_chart @ rv  # w[l]
            out[base : base + 2] = adot
            out[base + 2 : base + 4] = inv @ w
        return out

    return f


@dataclass
class JacobiSolution:
    """Samples of a geodesic, its parallel frame, and Jacobi coefficients."""

    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    frame: np.ndarray  # (n, 2, 2) chart matrix, columns are e1 and e2
    a: np.ndarray  # (n, 2) or (n, n_pairs, 2)
    adot: np.ndarray
    status: str
    t_escape: float | None

    def jacobi_chart(self, i: int) -> np.ndarray:
        """Chart components of the Jacobi field at sample i."""
        return self.frame[i] @ self.a[i]


def _validate_frame(frame) -> np.ndarray:
    """Initial frame given as a pair of chart vectors (e1, e2) -> columns."""
    e = np.asarray(frame, dtype=float)
    if e.shape != (2, 2):
        raise InvalidIVPError("frame must be a pair of 2-vectors (e1, e2)")
    e = e.T
    if abs(np.linalg.det(e)) < 1e-12:
        raise FrameDegenerateError("initial frame is (near) degenerate")
    return e


def _reachable_cap(field, p, v, t_max, rtol, atol):
    """Largest safe sweep end before the plain geodesic stops.

    The augmented frame/Jacobi system becomes hopelessly stiff inside a
    finite-time escape, so the geodesic alone (cheap, 4 equations) is run
    first; if it stops before t_max the sweep end is pulled back by a small
    relative margin.  Returns (cap, status, t_escape) where status is the
    verdict to report when the cap is the binding constraint.
    """
    t_max = float(t_max)
    probe = solve_ode(geodesic_rhs(field), 0.0, np.concatenate([p, v]), t_max,
                      rtol=rtol, atol=atol)
    status = _status_of(field, probe)
    if status == "complete":
        return t_max, "complete", None
    t_stop = float(probe.t_final)
    margin = 2e-3 * max(1.0, abs(t_stop))
    cap = t_stop - math.copysign(margin, t_max)
    if t_max < 0.0:
        cap = min(cap, 0.0)
    else:
        cap = max(cap, 0.0)
    return cap, status, probe.t_escape


def integrate_jacobi(
    field: ChristoffelField,
    point,
    velocity,
    a0,
    adot0,
    t_max: float,
    *,
    frame=((1.0, 0.0), (0.0, 1.0)),
    samples: int = 201,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> JacobiSolution:
    """Integrate one Jacobi field with frame coefficients (a0, adot0)."""
    p, v = _check_ivp(field, point, velocity)
    e = _validate_frame(frame)
    y0 = np.concatenate(
        [p, v, e[:, 0], e[:, 1], np.asarray(a0, float), np.asarray(adot0, float)]
    )
    cap, cap_status, cap_escape = _reachable_cap(field, p, v, t_max, rtol, atol)
    grid = np.linspace(0.0, cap, samples)
    res = solve_ode(
        _jacobi_rhs(field, 1), 0.0, y0, cap, rtol=rtol, atol=atol, t_eval=grid
    )
    if res.status == "reached":
        status, t_escape = cap_status, cap_escape
    else:
        status, t_escape = _status_of(field, res), res.t_escape
    ys = res.sample_ys
    frames = np.empty((ys.shape[0], 2, 2))
    for i in range(ys.shape[0]):
        frames[i] = _frame_matrix(ys[i])
    return JacobiSolution(
        t=res.sample_ts,
        x=ys[:, 0:2],
        v=ys[:, 2:4],
        frame=frames,
        a=ys[:, 8:10],
        adot=ys[:, 10:12],
        status=status,
        t_escape=t_escape,
    )


def conjugate_points(
    field: ChristoffelField,
    point,
    velocity,
    t_max: float,
    *,
    scan_samples: int = 400,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    det_tol: float = 1e-10,
) -> list[float]:
    """Parameter values in (0, t_max] conjugate to t = 0 along the geodesic.

    Integrates two Jacobi fields with J(0) = 0 and derivative coefficients
    (1, 0) and (0, 1); their coefficient determinant vanishes exactly at
    conjugate points.  Sign changes on a ``scan_samples`` grid are refined
    by bisection re-integrating from the nearest accepted knot, so each
    root is located to integrator accuracy rather than grid accuracy.

    If the geodesic itself stops before t_max (escape or chart exit) the
    sweep covers the reachable span only, ending a small relative margin
    before the stop.
    """
    p, v = _check_ivp(field, point, velocity)
    if v == (0.0, 0.0):
        raise InvalidIVPError("conjugate points need a nonzero velocity")
    y0 = np.concatenate(
        [
            p,
            v,
            (1.0, 0.0),
            (0.0, 1.0),
            (0.0, 0.0),
            (1.0, 0.0),  # first field: a = 0, a' = e1 coefficient
            (0.0, 0.0),
            (0.0, 1.0),  # second field: a = 0, a' = e2 coefficient
        ]
    )
    rhs = _jacobi_rhs(field, 2)
    cap, _, _ = _reachable_cap(field, p, v, t_max, rtol, atol)
    if cap <= 0.0:
        return []
    grid = np.linspace(0.0, cap, scan_samples)
    res = solve_ode(rhs, 0.0, y0, cap, rtol=rtol, atol=atol, t_eval=grid)

    def det_of(y):
        return y[8] * y[13] - y[9] * y[12]

    knots_t, knots_y = res.ts, res.ys

    def det_at(t: float) -> float:
        idx = int(np.searchsorted(knots_t, t, side="right")) - 1
        idx = max(0, min(idx, knots_t.shape[0] - 1))
        t0, y0k = float(knots_t[idx]), knots_y[idx]
        if t0 == t:
            return det_of(y0k)
        sub = solve_ode(rhs, t0, y0k, t, rtol=rtol, atol=atol)
        if sub.status != "reached":
            raise FrameDegenerateError(
                f"could not re-integrate to t={t} while refining a root"
            )
        return det_of(sub.ys[-1])

    ts = res.sample_ts
    dets = np.array([det_of(y) for y in res.sample_ys])
    # the determinant starts at 0 with derivative 0; skip the launch window
    scale = np.max(np.abs(dets)) if dets.size else 0.0
    roots: list[float] = []
    for i in range(1, len(ts) - 1):
        if ts[i] <= 0.0:
            continue
        a, b = dets[i], dets[i + 1]
        if a == 0.0 and abs(ts[i]) > 1e-12:
            roots.append(float(ts[i]))
        elif a * b < 0.0:
            roots.append(float(brentq(det_at, float(ts[i]), float(ts[i + 1]), xtol=1e-12)))
        elif (
            scale > 0.0
            and abs(a) < det_tol * scale
            and 0.0 < ts[i]
            and abs(a) < abs(dets[i - 1])
            and abs(a) < abs(b)
        ):
            # tangential zero (double root): keep the local minimum sample
            roots.append(float(ts[i]))
    return roots
