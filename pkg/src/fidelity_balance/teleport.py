"""Teleportation with a shared pure state of given Schmidt spectrum."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidSpectrum
from .frontier import SOUNDNESS_TOL, BoundVerdict, bound_check_gaps

NORMALIZATION_TOL = 1e-12
RENORMALIZE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    """Descending nonnegative Schmidt coefficients with unit sum of squares."""

    coefficients: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.coefficients, dtype=float)
        if mu.ndim != 1 or mu.size < 2:
            raise InvalidSpectrum("need at least two Schmidt coefficients")
        if not np.all(np.isfinite(mu)) or np.any(mu < 0):
            raise InvalidSpectrum("Schmidt coefficients must be finite and nonnegative")
        if np.any(np.diff(mu) > 0):
            raise InvalidSpectrum("Schmidt coefficients must be in descending order")
        if abs(float(np.sum(mu**2)) - 1.0) > NORMALIZATION_TOL:
            raise InvalidSpectrum("Schmidt coefficients are not normalized")
        mu = mu.copy()
        mu.setflags(write=False)
        object.__setattr__(self, "coefficients", mu)

    @classmethod
    def from_coefficients(cls, values, tol: float = RENORMALIZE_TOL) -> "SchmidtSpectrum":
        """Sort descending and renormalize if off by at most ``tol``."""
        mu = np.sort(np.asarray(values, dtype=float))[::-1]
        if mu.size and (not np.all(np.isfinite(mu)) or mu[-1] < 0):
            raise InvalidSpectrum("Schmidt coefficients must be finite and nonnegative")
        norm2 = float(np.sum(mu**2))
        if abs(norm2 - 1.0) > tol:
            raise InvalidSpectrum(f"sum of squares {norm2!r} is not 1")
        return cls(mu / math.sqrt(norm2))

    @property
    def dim(self) -> int:
        return self.coefficients.size

    @property
    def mu0(self) -> float:
        return float(self.coefficients[0])


def teleport_fidelity(mu: SchmidtSpectrum) -> float:
    d = mu.dim
    return (1.0 + float(np.sum(mu.coefficients)) ** 2) / (d + 1)


def teleport_estimation_fidelity(mu: SchmidtSpectrum) -> float:
    return (1.0 + mu.mu0**2) / (mu.dim + 1)


def optimal_schmidt(mu0: float, d: int) -> SchmidtSpectrum:
    """Spectrum with largest coefficient ``mu0`` and an equal tail."""
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {d!r}")
    lo = 1.0 / math.sqrt(d)
    if not lo - 1e-12 <= mu0 <= 1.0 + 1e-12:
        raise DomainError(f"mu0={mu0!r} outside [1/sqrt(d), 1]")
    mu0 = min(max(float(mu0), lo), 1.0)
    tail = math.sqrt(max(1.0 - mu0 * mu0, 0.0) / (d - 1))
    # equal-tail spectrum: tail <= mu0 holds on the whole domain
    mu = np.full(d, min(tail, mu0))
    mu[0] = mu0
    return SchmidtSpectrum.from_coefficients(mu)


def teleport_tradeoff_check(mu: SchmidtSpectrum, tol: float = SOUNDNESS_TOL) -> BoundVerdict:
    """Trade-off bound applied to ``(F_tele, G_tele)``.

    The distances of both fidelities from ``1/(d+1)`` and of ``G_tele`` from
    ``2/(d+1)`` are formed from the coefficients directly.
    """
    d = mu.dim
    c = mu.coefficients
    return bound_check_gaps(
        float(np.sum(c)) ** 2 / (d + 1),
        mu.mu0**2 / (d + 1),
        float(np.sum(c[1:] ** 2)) / (d + 1),
        d,
        tol,
    )
