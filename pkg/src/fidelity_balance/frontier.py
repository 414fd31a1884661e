"""The F-versus-G trade-off: bound check, boundary curve, saturating operations.

Points on the boundary are parametrized by ``g = d(d+1)G - d`` in ``[1, d]``;
``g = 1`` is the do-nothing endpoint (F = 1, G = 1/d) and ``g = d`` the
optimal-measurement endpoint (F = G = 2/(d+1)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .operations import QuantumOperation

DOMAIN_TOL = 1e-12
SATURATION_TOL = 1e-10
SOUNDNESS_TOL = 1e-9


def _check_dim(d: int) -> None:
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {d!r}")


def _clamp(x: float, lo: float, hi: float, tol: float, name: str) -> float:
    if x < lo - tol or x > hi + tol:
        raise DomainError(f"{name}={x!r} outside [{lo!r}, {hi!r}]")
    return min(max(x, lo), hi)


@dataclass(frozen=True)
class GParameter:
    d: int
    g: float

    def __post_init__(self):
        _check_dim(self.d)
        object.__setattr__(self, "g", _clamp(float(self.g), 1.0, float(self.d), DOMAIN_TOL, "g"))

    @classmethod
    def from_G(cls, G: float, d: int) -> "GParameter":
        _check_dim(d)
        G = _clamp(float(G), 1.0 / d, 2.0 / (d + 1), DOMAIN_TOL, "G")
        return cls(d, d * (d + 1) * G - d)

    @property
    def G(self) -> float:
        return (self.d + self.g) / (self.d * (self.d + 1))


@dataclass(frozen=True)
class FrontierPoint:
    G: float
    F_max: float


@dataclass(frozen=True)
class EllipseParams:
    d: int
    F0: Fraction
    G0: Fraction


@dataclass(frozen=True)
class BoundVerdict:
    lhs: float
    rhs: float
    slack: float
    satisfied: bool


def bound_check(F: float, G: float, d: int, tol: float = SOUNDNESS_TOL) -> BoundVerdict:
    """Evaluate both sides of the trade-off inequality.

    ``sqrt(F - 1/(d+1)) <= sqrt(G - 1/(d+1)) + sqrt((d-1)(2/(d+1) - G))``.
    Inputs within ``tol`` of the domain edges are clamped onto it first.
    """
    _check_dim(d)
    base = 1.0 / (d + 1)
    F = float(F)
    if F < base - tol:
        raise DomainError(f"F={F!r} below 1/(d+1)")
    F = max(F, base)
    G = _clamp(float(G), base, 2.0 * base, tol, "G")
    return bound_check_gaps(F - base, G - base, 2.0 * base - G, d, tol)


def bound_check_gaps(
    f_excess: float, g_excess: float, g_deficit: float, d: int, tol: float = SOUNDNESS_TOL
) -> BoundVerdict:
    """Bound check from ``F - 1/(d+1)``, ``G - 1/(d+1)`` and ``2/(d+1) - G``.

    Callers that know these differences in closed form avoid the cancellation
    in ``2/(d+1) - G``, which the square root amplifies near the
    optimal-measurement endpoint.
    """
    lhs = math.sqrt(max(f_excess, 0.0))
    rhs = math.sqrt(max(g_excess, 0.0)) + math.sqrt((d - 1) * max(g_deficit, 0.0))
    slack = rhs - lhs
    return BoundVerdict(lhs=lhs, rhs=rhs, slack=slack, satisfied=slack >= -tol)


def max_f_from_g(g: float, d: int) -> float:
    """Boundary value of F at parameter ``g`` in ``[1, d]``."""
    p = GParameter(d, g)
    f = (math.sqrt(p.g) + math.sqrt((d - 1) * (d - p.g))) ** 2
    return (d + f) / (d * (d + 1))


def max_operation_fidelity(G: float, d: int) -> float:
    """Largest F compatible with estimation fidelity ``G`` in ``[1/d, 2/(d+1)]``."""
    return max_f_from_g(GParameter.from_G(G, d).g, d)


def extremal_operation(d: int, g: float) -> QuantumOperation:
    """d-outcome operation on the boundary at parameter ``g``.

    ``A_r = sqrt(g/d) |r><r| + sqrt((d-g)/(d(d-1))) (I - |r><r|)`` in the
    computational basis.
    """
    p = GParameter(d, g)
    big = math.sqrt(p.g / d)
    small = math.sqrt((d - p.g) / (d * (d - 1)))
    kraus = []
    for r in range(d):
        diag = np.full(d, small)
        diag[r] = big
        kraus.append(np.diag(diag).astype(np.complex128))
    return QuantumOperation(tuple(kraus))


def ellipse_params(d: int) -> EllipseParams:
    _check_dim(d)
    return EllipseParams(d=d, F0=Fraction(d + 2, 2 * d + 2), G0=Fraction(3, 2 * d + 2))


def ellipse_residual(F: float, G: float, d: int) -> float:
    """Signed residual of the boundary conic; zero on the frontier."""
    p = ellipse_params(d)
    x = F - float(p.F0)
    y = G - float(p.G0)
    return x * x + d * d * y * y + 2 * (d - 2) * x * y - (d - 1) / (d + 1) ** 2


def frontier_curve(d: int, points: int) -> list[FrontierPoint]:
    """Boundary sampled at ``points`` values of G spaced evenly on ``[1/d, 2/(d+1)]``."""
    _check_dim(d)
    if points < 2:
        raise DomainError("need at least 2 points")
    lo, hi = 1.0 / d, 2.0 / (d + 1)
    out = []
    for k in range(points):
        if k == 0:
            out.append(FrontierPoint(lo, 1.0))
        elif k == points - 1:
            out.append(FrontierPoint(hi, hi))
        else:
            G = lo + (hi - lo) * k / (points - 1)
            out.append(FrontierPoint(G, max_operation_fidelity(G, d)))
    return out
