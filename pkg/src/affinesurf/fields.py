"""Christoffel coefficient charts for torsion-free surface connections.

A field holds the six independent connection coefficients on a coordinate
patch.  Three kinds are supported:

* kind ``"A"``: constant coefficients on all of the plane;
* kind ``"B"``: coefficients of the form (table)/x1 on the half plane x1 > 0;
* kind ``"analytic"``: arbitrary smooth coefficients given by callables,
  together with their first coordinate derivatives.

Coefficients for kinds A and B are exact rationals so that downstream
curvature tables and zero tests are exact.  The packing order of the six
independent entries is fixed once here and used everywhere:

    (c11_1, c11_2, c12_1, c12_2, c22_1, c22_2)

where ``cij_k`` multiplies dx^k applied to the pair (d/dx^i, d/dx^j) and the
lower pair is symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError

__all__ = [
    "COEFF_NAMES",
    "KIND_A",
    "KIND_B",
    "KIND_ANALYTIC",
    "Point2",
    "TangentVector2",
    "ChristoffelField",
    "as_coeffs",
    "coeffs_to_tensor",
    "tensor_to_coeffs",
    "christoffel_at",
]

COEFF_NAMES = ("c11_1", "c11_2", "c12_1", "c12_2", "c22_1", "c22_2")

KIND_A = "A"
KIND_B = "B"
KIND_ANALYTIC = "analytic"

# (i, j, k) zero-based index of each packed slot, lower pair sorted.
_SLOT_INDEX = {
    (0, 0, 0): 0,
    (0, 0, 1): 1,
    (0, 1, 0): 2,
    (0, 1, 1): 3,
    (1, 1, 0): 4,
    (1, 1, 1): 5,
}


class Point2(NamedTuple):
    """Chart point (x1, x2)."""

    x1: float
    x2: float


class TangentVector2(NamedTuple):
    """Tangent vector (xi1, xi2) in chart coordinates."""

    xi1: float
    xi2: float


def as_coeffs(values) -> tuple[Fraction, ...]:
    """Coerce an iterable of six rational-like values to exact Fractions.

    Accepts ints, Fractions, and strings such as ``"-1/2"``.  Floats are
    rejected: exact tables must not be seeded from rounded data.
    """
    vals = tuple(values)
    if len(vals) != 6:
        raise ValueError(f"expected 6 coefficients, got {len(vals)}")
    out = []
    for v in vals:
        if isinstance(v, float):
            raise TypeError(
                "float coefficient %r: pass Fraction/int/str to keep tables exact" % (v,)
            )
        out.append(Fraction(v))
    return tuple(out)


def coeffs_to_tensor(coeffs):
    """Expand six packed coefficients to a full symmetric [i][j][k] table."""
    g = [[[None, None] for _ in range(2)] for _ in range(2)]
    for (i, j, k), slot in _SLOT_INDEX.items():
        g[i][j][k] = coeffs[slot]
        g[j][i][k] = coeffs[slot]
    return g


def tensor_to_coeffs(tensor) -> tuple:
    """Pack a symmetric [i][j][k] table back to the six-slot order."""
    return tuple(tensor[i][j][k] for (i, j, k) in sorted(_SLOT_INDEX, key=_SLOT_INDEX.get))


@dataclass(frozen=True)
class ChristoffelField:
    """Immutable connection chart.

    Exactly one of the two payloads is populated: ``coeffs`` for kinds A/B,
    or the ``gamma``/``dgamma`` callables for analytic fields.  ``gamma``
    maps (x1, x2) to the six packed coefficients; ``dgamma`` maps (x1, x2)
    to a 6 x 2 array of their d/dx1 and d/dx2 derivatives.
    """

    kind: str
    coeffs: tuple[Fraction, ...] | None = None
    gamma: Callable[[float, float], tuple] | None = None
    dgamma: Callable[[float, float], tuple] | None = None
    name: str = ""

    def __post_init__(self):
        if self.kind in (KIND_A, KIND_B):
            if self.coeffs is None or len(self.coeffs) != 6:
                raise ValueError(f"kind {self.kind!r} requires six exact coefficients")
            if self.gamma is not None or self.dgamma is not None:
                raise ValueError("constant-table kinds must not carry callables")
        elif self.kind == KIND_ANALYTIC:
            if self.gamma is None or self.dgamma is None:
                raise ValueError("analytic kind requires gamma and dgamma callables")
            if self.coeffs is not None:
                raise ValueError("analytic kind must not carry a coefficient table")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @staticmethod
    def type_a(values, name: str = "") -> "ChristoffelField":
        return ChristoffelField(kind=KIND_A, coeffs=as_coeffs(values), name=name)

    @staticmethod
    def type_b(values, name: str = "") -> "ChristoffelField":
        return ChristoffelField(kind=KIND_B, coeffs=as_coeffs(values), name=name)

    @staticmethod
    def analytic(gamma, dgamma, name: str = "") -> "ChristoffelField":
        return ChristoffelField(kind=KIND_ANALYTIC, gamma=gamma, dgamma=dgamma, name=name)

    def contains(self, p) -> bool:
        """True when the point lies in the field's coordinate chart."""
        if self.kind == KIND_B:
            return float(p[0]) > 0.0
        return True

    def require_point(self, p) -> None:
        if not self.contains(p):
            raise DomainError(
                f"point {tuple(float(c) for c in p)} outside the x1 > 0 chart of a kind-B field"
            )


def _packed_at(field: ChristoffelField, p) -> tuple[float, ...]:
    """Six packed coefficient values at a point, as floats."""
    field.require_point(p)
    if field.kind == KIND_A:
        return tuple(float(c) for c in field.coeffs)
    if field.kind == KIND_B:
        inv = 1.0 / float(p[0])
        return tuple(float(c) * inv for c in field.coeffs)
    vals = tuple(field.gamma(float(p[0]), float(p[1])))
    if len(vals) != 6:
        raise ValueError("analytic gamma callable must return six values")
    return tuple(float(v) for v in vals)


def christoffel_at(field: ChristoffelField, p) -> np.ndarray:
    """Connection coefficients at a point as a (2, 2, 2) array G[i, j, k].

    G[i, j, k] is the dx^k component of the covariant derivative of d/dx^j
    in the d/dx^i direction; the array is symmetric in (i, j).
    """
    packed = _packed_at(field, p)
    g = np.empty((2, 2, 2))
    for (i, j, k), slot in _SLOT_INDEX.items():
        g[i, j, k] = packed[slot]
        g[j, i, k] = packed[slot]
    return g
