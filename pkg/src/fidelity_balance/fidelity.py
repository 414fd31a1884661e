"""Operation fidelity F and estimation fidelity G.

Closed forms use the trace of each Kraus operator (for F) and its operator
norm or the chosen guesses (for G). The ``mc_*`` functions estimate the same
quantities by averaging the defining integrands over Haar-random input
states, and serve as an independent check on the closed forms.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimMismatch, IndexOutOfRange
from .linalg import ComplexMatrix, fix_phase, hermitian_eigensystem, operator_norm
from .operations import (
    COMPLETENESS_TOL,
    PureState,
    QuantumOperation,
    require_valid,
    sample_haar_states,
)

DEGENERACY_TOL = 1e-10
CHUNK_SIZE = 8192


@dataclass(frozen=True)
class FidelityPair:
    F: float
    G: float


@dataclass(frozen=True)
class GuessAssignment:
    guesses: tuple

    def __post_init__(self):
        object.__setattr__(self, "guesses", tuple(self.guesses))
        for g in self.guesses:
            if not isinstance(g, PureState):
                raise TypeError("guesses must be PureState instances")

    def __len__(self) -> int:
        return len(self.guesses)

    def as_array(self) -> np.ndarray:
        return np.stack([g.amplitudes for g in self.guesses])


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int

    def agrees_with(self, value: float, k: float = 4.0, floor: float = 1e-12) -> bool:
        """Whether ``value`` lies within ``k`` standard errors (plus ``floor``)."""
        return abs(value - self.mean) <= k * self.std_error + floor


@dataclass(frozen=True)
class McConfig:
    samples: int = 100_000
    seed: int = 0
    workers: int = 1
    chunk_size: int = CHUNK_SIZE


def _norm_const(d: int) -> float:
    return 1.0 / (d * (d + 1))


def operation_fidelity(op: QuantumOperation, tol: float = COMPLETENESS_TOL) -> float:
    """Mean operation fidelity ``(d + sum_r |Tr A_r|^2) / (d(d+1))``."""
    require_valid(op, tol)
    d = op.dim
    traces = np.trace(op.stacked(), axis1=1, axis2=2)
    return (d + float(np.sum(np.abs(traces) ** 2))) * _norm_const(d)


def _top_eigenvector(h: ComplexMatrix) -> np.ndarray:
    eig = hermitian_eigensystem(h)
    w = eig.eigenvalues
    top = int(np.count_nonzero(w >= w[0] - DEGENERACY_TOL))
    if top == 1:
        return eig.eigenvectors[:, 0]
    # degenerate top eigenspace: project basis vectors in order, keep the first
    # with a usable component, so the choice does not depend on the solver
    span = eig.eigenvectors[:, :top]
    for k in range(h.shape[0]):
        v = span @ span[k].conj()
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            return fix_phase((v / norm)[:, None])[:, 0]
    return eig.eigenvectors[:, 0]


def optimal_guesses(op: QuantumOperation) -> GuessAssignment:
    """For each outcome, a top eigenvector of ``A_r^H A_r``."""
    return GuessAssignment(
        tuple(PureState.normalized(_top_eigenvector(a.conj().T @ a)) for a in op.kraus)
    )


def _check_guesses(op: QuantumOperation, guesses: GuessAssignment) -> None:
    if len(guesses) != op.n_outcomes:
        raise DimMismatch(f"{len(guesses)} guesses for {op.n_outcomes} outcomes")
    for g in guesses.guesses:
        if g.dim != op.dim:
            raise DimMismatch(f"guess dimension {g.dim} != operation dimension {op.dim}")


def estimation_fidelity(
    op: QuantumOperation, guesses: GuessAssignment, tol: float = COMPLETENESS_TOL
) -> float:
    """Mean estimation fidelity ``(d + sum_r <psi_r|A_r^H A_r|psi_r>) / (d(d+1))``."""
    require_valid(op, tol)
    _check_guesses(op, guesses)
    phi = np.einsum("rij,rj->ri", op.stacked(), guesses.as_array())
    return (op.dim + float(np.sum(np.abs(phi) ** 2))) * _norm_const(op.dim)


def estimation_fidelity_optimal(op: QuantumOperation, tol: float = COMPLETENESS_TOL) -> float:
    """Best achievable G: ``(d + sum_r ||A_r||^2) / (d(d+1))``."""
    require_valid(op, tol)
    norms = np.array([operator_norm(a) for a in op.kraus])
    return (op.dim + float(np.sum(norms**2))) * _norm_const(op.dim)


def fidelity_pair(op: QuantumOperation, tol: float = COMPLETENESS_TOL) -> FidelityPair:
    return FidelityPair(F=operation_fidelity(op, tol), G=estimation_fidelity_optimal(op, tol))


def moment_operator(d: int, i: int, j: int) -> ComplexMatrix:
    """Haar average of ``<psi|i><j|psi> |psi><psi|``: ``(delta_ij I + |i><j|) / (d(d+1))``."""
    if not (0 <= i < d and 0 <= j < d):
        raise IndexOutOfRange(f"basis indices ({i}, {j}) out of range for d={d}")
    m = np.zeros((d, d), dtype=np.complex128)
    if i == j:
        m += np.eye(d)
    m[i, j] += 1.0
    return m * _norm_const(d)


# -- Monte Carlo --------------------------------------------------------------


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(chunk,)))


def _run_chunks(
    fn: Callable[[np.ndarray], np.ndarray],
    d: int,
    samples: int,
    seed: int,
    workers: int,
    chunk_size: int,
) -> list:
    """Apply ``fn`` to Haar batches; chunk ``c`` always draws from stream ``(seed, c)``.

    Results come back in chunk order, so any reduction over them is
    independent of ``workers``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    sizes = [min(chunk_size, samples - start) for start in range(0, samples, chunk_size)]

    def run(c: int):
        return fn(sample_haar_states(d, sizes[c], _chunk_rng(seed, c)))

    if workers <= 1 or len(sizes) == 1:
        return [run(c) for c in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, range(len(sizes))))


def _estimate(values: np.ndarray) -> McEstimate:
    n = values.size
    mean = float(np.mean(values))
    se = float(np.std(values, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return McEstimate(mean=mean, std_error=se, samples=n)


def mc_operation_fidelity(
    op: QuantumOperation,
    samples: int,
    seed: int,
    workers: int = 1,
    chunk_size: int = CHUNK_SIZE,
) -> McEstimate:
    """Haar average of ``sum_r |<psi|A_r|psi>|^2``."""
    stack = op.stacked()

    def integrand(psi):
        a_psi = np.einsum("rij,sj->sri", stack, psi)
        amp = np.einsum("si,sri->sr", psi.conj(), a_psi)
        return np.sum(np.abs(amp) ** 2, axis=1)

    parts = _run_chunks(integrand, op.dim, samples, seed, workers, chunk_size)
    return _estimate(np.concatenate(parts))


def mc_estimation_fidelity(
    op: QuantumOperation,
    guesses: GuessAssignment,
    samples: int,
    seed: int,
    workers: int = 1,
    chunk_size: int = CHUNK_SIZE,
) -> McEstimate:
    """Haar average of ``sum_r <psi|A_r^H A_r|psi> |<psi_r|psi>|^2``."""
    _check_guesses(op, guesses)
    stack = op.stacked()
    g = guesses.as_array()

    def integrand(psi):
        prob = np.sum(np.abs(np.einsum("rij,sj->sri", stack, psi)) ** 2, axis=2)
        overlap = np.abs(psi @ g.conj().T) ** 2
        return np.sum(prob * overlap, axis=1)

    parts = _run_chunks(integrand, op.dim, samples, seed, workers, chunk_size)
    return _estimate(np.concatenate(parts))


def mc_moment_operator(
    d: int,
    i: int,
    j: int,
    samples: int,
    seed: int,
    workers: int = 1,
    chunk_size: int = CHUNK_SIZE,
) -> ComplexMatrix:
    """Sample mean of ``<psi|i><j|psi> |psi><psi|`` over Haar states."""
    if not (0 <= i < d and 0 <= j < d):
        raise IndexOutOfRange(f"basis indices ({i}, {j}) out of range for d={d}")

    def partial_sum(psi):
        w = psi[:, i].conj() * psi[:, j]
        return np.einsum("s,sk,sl->kl", w, psi, psi.conj())

    total = np.zeros((d, d), dtype=np.complex128)
    for part in _run_chunks(partial_sum, d, samples, seed, workers, chunk_size):
        total += part
    return total / samples
