"""Dense complex matrix kernel.

Matrices are plain ``complex128`` numpy arrays. The routines here are sized
for the small systems this package deals with (d up to a few dozen), so
clarity wins over blocking or other performance tricks.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NonSquare, NotHermitian, ShapeMismatch

ComplexMatrix = np.ndarray

HERMITIAN_TOL = 1e-9
ZERO_SINGULAR_VALUE = 1e-12
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class HermitianEigen:
    """Eigensystem of a Hermitian matrix, eigenvalues in descending order.

    Column ``k`` of ``eigenvectors`` belongs to ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: ComplexMatrix


@dataclass(frozen=True)
class PolarFactors:
    """Factorization ``a = left @ diag(diag) @ right`` with unitary outer factors."""

    left: ComplexMatrix
    diag: np.ndarray
    right: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        return (self.left * self.diag) @ self.right

    def positive_part(self) -> ComplexMatrix:
        """The positive semidefinite factor ``right^H diag right``."""
        p = (self.right.conj().T * self.diag) @ self.right
        return (p + p.conj().T) / 2


def as_matrix(m) -> ComplexMatrix:
    """Coerce ``m`` to a finite 2-D complex128 array."""
    arr = np.array(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D matrix, got shape {arr.shape}")
    if arr.size == 0:
        raise ShapeMismatch("matrix has no entries")
    if not np.all(np.isfinite(arr)):
        raise ShapeMismatch("matrix contains non-finite entries")
    return arr


def _require_square(m: ComplexMatrix) -> None:
    if m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")


def adjoint(m) -> ComplexMatrix:
    return as_matrix(m).conj().T.copy()


def mat_trace(m) -> complex:
    m = as_matrix(m)
    _require_square(m)
    return complex(np.trace(m))


def fix_phase(vectors: ComplexMatrix) -> ComplexMatrix:
    """Rotate each column so its largest-magnitude entry is real positive.

    Ties within 1e-12 of the maximum go to the lowest index.
    """
    out = np.array(vectors, dtype=np.complex128, copy=True)
    mags = np.abs(out)
    for k in range(out.shape[1]):
        col = mags[:, k]
        idx = int(np.flatnonzero(col >= col.max() - 1e-12)[0])
        pivot = out[idx, k]
        if pivot != 0:
            out[:, k] *= np.conj(pivot) / abs(pivot)
    return out


def _off_diagonal(a: ComplexMatrix) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _jacobi_eigh(h: ComplexMatrix, tol: float, max_sweeps: int):
    a = np.array(h, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v
    for _ in range(max_sweeps):
        if _off_diagonal(a) < tol * scale:
            return np.diag(a).real.copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / abs(theta)
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # phase diag(1, conj(phase)) then real rotation [[c, s], [-s, c]]
                g = np.array(
                    [[c, s], [-s * np.conj(phase), c * np.conj(phase)]],
                    dtype=np.complex128,
                )
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ g
    off = _off_diagonal(a)
    if off < tol * scale:
        return np.diag(a).real.copy(), v
    raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps (off={off:.3e})")


def hermitian_eigensystem(h, method: str = "lapack") -> HermitianEigen:
    """Full eigensystem of a Hermitian matrix.

    Args:
        h: square matrix, Hermitian to within 1e-9 relative Frobenius norm.
        method: ``"lapack"`` (numpy ``eigh``) or ``"jacobi"`` (cyclic complex
            Jacobi rotations, capped at 100 sweeps).

    Returns:
        HermitianEigen with eigenvalues descending and each eigenvector's
        largest-magnitude component made real positive.

    Raises:
        NonSquare, NotHermitian, NoConvergence.
    """
    h = as_matrix(h)
    _require_square(h)
    norm = np.linalg.norm(h)
    if np.linalg.norm(h - h.conj().T) > HERMITIAN_TOL * max(norm, 1.0):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    h = (h + h.conj().T) / 2
    if method == "lapack":
        w, v = np.linalg.eigh(h)
    elif method == "jacobi":
        w, v = _jacobi_eigh(h, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    order = np.argsort(-w, kind="stable")
    return HermitianEigen(eigenvalues=w[order], eigenvectors=fix_phase(v[:, order]))


def gram_schmidt(columns: ComplexMatrix) -> ComplexMatrix:
    """Modified Gram-Schmidt on the columns of ``columns`` (assumed independent)."""
    q = np.array(columns, dtype=np.complex128, copy=True)
    for k in range(q.shape[1]):
        for j in range(k):
            q[:, k] -= np.vdot(q[:, j], q[:, k]) * q[:, j]
        q[:, k] /= np.linalg.norm(q[:, k])
    return q


def complete_basis(q: ComplexMatrix, n: int) -> ComplexMatrix:
    """Extend orthonormal columns ``q`` (n x k) to an n x n unitary."""
    basis = [q[:, k] for k in range(q.shape[1])]
    for i in range(n):
        if len(basis) == n:
            break
        e = np.zeros(n, dtype=np.complex128)
        e[i] = 1.0
        for _ in range(2):
            for b in basis:
                e -= np.vdot(b, e) * b
        norm = np.linalg.norm(e)
        if norm > 1e-6:
            basis.append(e / norm)
    return np.column_stack(basis) if basis else np.zeros((n, 0), dtype=np.complex128)


def polar_decompose(a) -> PolarFactors:
    """Polar/singular-value form ``a = V diag(lam) W`` of a square matrix.

    Works from the eigensystem of ``a^H a``: ``W^H`` holds its eigenvectors,
    the singular values are the norms of ``a w_k`` and the left factor is
    recovered by normalising those columns. Singular values at or below 1e-12
    are set to zero and their left columns are filled in by orthonormal
    completion.
    """
    a = as_matrix(a)
    _require_square(a)
    n = a.shape[0]
    eig = hermitian_eigensystem(a.conj().T @ a)
    w = eig.eigenvectors
    cols = a @ w
    sig = np.linalg.norm(cols, axis=0)
    order = np.argsort(-sig, kind="stable")
    sig, w, cols = sig[order], w[:, order], cols[:, order]
    keep = sig > ZERO_SINGULAR_VALUE * max(1.0, sig[0])
    rank = int(np.count_nonzero(keep))
    left = gram_schmidt(cols[:, :rank] / sig[:rank]) if rank else np.zeros((n, 0), complex)
    left = complete_basis(left, n)
    sig = np.where(keep, sig, 0.0)
    return PolarFactors(left=left, diag=sig, right=w.conj().T)


def operator_norm(a) -> float:
    """Largest singular value of ``a``."""
    return float(polar_decompose(a).diag[0])


def singular_values(a) -> np.ndarray:
    return polar_decompose(a).diag


def is_unitary(u, tol: float = 1e-10) -> bool:
    u = as_matrix(u)
    return u.shape[0] == u.shape[1] and np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])) <= tol
