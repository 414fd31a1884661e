"""Trace-preserving operations in Kraus form, pure states, and samplers."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimMismatch,
    IndexOutOfRange,
    InvalidOperation,
    ShapeMismatch,
    ZeroProbabilityOutcome,
)
from .linalg import ComplexMatrix, as_matrix, gram_schmidt, polar_decompose

COMPLETENESS_TOL = 1e-9
ZERO_PROBABILITY = 1e-14
STATE_NORM_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size < 1:
            raise ShapeMismatch("state amplitudes must be a non-empty vector")
        if not np.all(np.isfinite(amps)):
            raise ShapeMismatch("state amplitudes must be finite")
        if abs(np.vdot(amps, amps).real - 1.0) > STATE_NORM_TOL:
            raise ShapeMismatch("state is not normalized")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @classmethod
    def basis(cls, d: int, k: int) -> "PureState":
        amps = np.zeros(d, dtype=np.complex128)
        amps[k] = 1.0
        return cls(amps)

    @classmethod
    def normalized(cls, vector) -> "PureState":
        v = np.asarray(vector, dtype=np.complex128)
        return cls(v / np.linalg.norm(v))


@dataclass(frozen=True, eq=False)
class QuantumOperation:
    """Kraus operators ``A_r`` of a d-level operation.

    Construction only checks shapes; use :func:`validate` (or the fidelity
    functions, which call :func:`require_valid`) for the completeness relation.
    """

    kraus: tuple

    def __post_init__(self):
        mats = tuple(_frozen(as_matrix(k)) for k in self.kraus)
        if not mats:
            raise ShapeMismatch("an operation needs at least one Kraus operator")
        d = mats[0].shape[0]
        for m in mats:
            if m.shape != (d, d):
                raise ShapeMismatch(
                    f"Kraus operators must all be {d}x{d}, got {m.shape[0]}x{m.shape[1]}"
                )
        if d < 2:
            raise ShapeMismatch("dimension must be at least 2")
        object.__setattr__(self, "kraus", mats)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    @property
    def n_outcomes(self) -> int:
        return len(self.kraus)

    def stacked(self) -> np.ndarray:
        """Kraus operators as an (N, d, d) array."""
        return np.stack(self.kraus)


@dataclass(frozen=True)
class OutcomeResult:
    probability: float
    post_state: PureState


@dataclass(frozen=True, eq=False)
class SingularSpectra:
    """Per-outcome singular values; row ``r`` is descending for outcome ``r``."""

    values: np.ndarray

    @property
    def n_outcomes(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def column_vectors(self) -> np.ndarray:
        """Vectors ``v_i = (lambda_i^1, ..., lambda_i^N)`` as columns of an (N, d) array."""
        return self.values

    def total_weight(self) -> float:
        return float(np.sum(self.values**2))


def completeness_residual(kraus: Sequence[ComplexMatrix]) -> float:
    stack = np.stack([np.asarray(k) for k in kraus])
    d = stack.shape[-1]
    total = np.einsum("rji,rjk->ik", stack.conj(), stack)
    return float(np.linalg.norm(total - np.eye(d)) / math.sqrt(d))


def validate(op: QuantumOperation) -> float:
    """Completeness residual ``||sum_r A_r^H A_r - I||_F / sqrt(d)``."""
    return completeness_residual(op.kraus)


def require_valid(op: QuantumOperation, tol: float = COMPLETENESS_TOL) -> None:
    residual = validate(op)
    if residual > tol:
        raise InvalidOperation(f"completeness residual {residual:.3e} exceeds {tol:.1e}")


def _check_outcome(op: QuantumOperation, r: int, psi: PureState) -> None:
    if not 0 <= r < op.n_outcomes:
        raise IndexOutOfRange(f"outcome {r} not in [0, {op.n_outcomes})")
    if psi.dim != op.dim:
        raise DimMismatch(f"state dimension {psi.dim} != operation dimension {op.dim}")


def outcome_probability(op: QuantumOperation, r: int, psi: PureState) -> float:
    """Probability ``<psi|A_r^H A_r|psi>`` of outcome ``r`` (0-based)."""
    _check_outcome(op, r, psi)
    phi = op.kraus[r] @ psi.amplitudes
    return float(np.vdot(phi, phi).real)


def apply_outcome(op: QuantumOperation, r: int, psi: PureState) -> OutcomeResult:
    """Conditional post-measurement state for outcome ``r``."""
    _check_outcome(op, r, psi)
    phi = op.kraus[r] @ psi.amplitudes
    prob = float(np.vdot(phi, phi).real)
    if prob < ZERO_PROBABILITY:
        raise ZeroProbabilityOutcome(f"outcome {r} has probability {prob:.3e}")
    post = phi / math.sqrt(prob)
    return OutcomeResult(probability=min(prob, 1.0), post_state=PureState.normalized(post))


def canonicalize(op: QuantumOperation) -> QuantumOperation:
    """Replace each ``A_r = V D W`` by the positive operator ``W^H D W``.

    This is ``A_r`` followed by the outcome-dependent unitary ``W^H V^H``, so
    singular spectra and the completeness relation are preserved, while the
    trace of each operator becomes the sum of its singular values.
    """
    return QuantumOperation(tuple(polar_decompose(a).positive_part() for a in op.kraus))


def singular_spectra(op: QuantumOperation) -> SingularSpectra:
    return SingularSpectra(np.array([polar_decompose(a).diag for a in op.kraus]))


def random_operation(d: int, n: int, seed: int) -> QuantumOperation:
    """Random N-outcome operation from an (n*d) x d complex Gaussian isometry."""
    if d < 2 or n < 1:
        raise ValueError("need d >= 2 and n >= 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n * d, d)) + 1j * rng.standard_normal((n * d, d))
    iso = gram_schmidt(g)
    return QuantumOperation(tuple(iso[r * d : (r + 1) * d] for r in range(n)))


def sample_haar_states(d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` Haar-random pure states as rows of a (count, d) array.

    Each state consumes 2d standard normals from ``rng``: d real parts
    followed by d imaginary parts.
    """
    z = rng.standard_normal((count, 2 * d))
    psi = z[:, :d] + 1j * z[:, d:]
    psi /= np.linalg.norm(psi, axis=1, keepdims=True)
    return psi


def sample_haar_state(d: int, rng: np.random.Generator) -> PureState:
    if d < 2:
        raise ValueError("need d >= 2")
    return PureState(sample_haar_states(d, 1, rng)[0])


def identity_operation(d: int) -> QuantumOperation:
    return QuantumOperation((np.eye(d),))


def projective_operation(d: int) -> QuantumOperation:
    """Complete von Neumann measurement in the computational basis."""
    return QuantumOperation(tuple(np.diag(np.eye(d)[k]) for k in range(d)))


# -- JSON wire format: {"dim": d, "kraus": [[[[re, im], ...], ...], ...]} --


def operation_to_dict(op: QuantumOperation) -> dict:
    return {
        "dim": op.dim,
        "kraus": [
            [[[float(z.real), float(z.imag)] for z in row] for row in a] for a in op.kraus
        ],
    }


def _reject_constant(name: str):
    raise ValueError(f"non-finite number {name} is not allowed")


def operation_from_dict(data) -> QuantumOperation:
    if not isinstance(data, dict):
        raise ShapeMismatch("operation must be a JSON object")
    for key in ("dim", "kraus"):
        if key not in data:
            raise ShapeMismatch(f"missing field {key!r}")
    d = data["dim"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        raise ShapeMismatch("field 'dim' must be an integer >= 2")
    kraus = data["kraus"]
    if not isinstance(kraus, list) or not kraus:
        raise ShapeMismatch("field 'kraus' must be a non-empty list")
    mats = []
    for r, mat in enumerate(kraus):
        where = f"kraus[{r}]"
        if not isinstance(mat, list) or len(mat) != d:
            raise ShapeMismatch(f"{where}: expected {d} rows")
        m = np.empty((d, d), dtype=np.complex128)
        for i, row in enumerate(mat):
            if not isinstance(row, list) or len(row) != d:
                raise ShapeMismatch(f"{where}[{i}]: expected {d} entries")
            for j, entry in enumerate(row):
                if (
                    not isinstance(entry, list)
                    or len(entry) != 2
                    or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
                ):
                    raise ShapeMismatch(f"{where}[{i}][{j}]: entry must be [re, im]")
                if not all(math.isfinite(x) for x in entry):
                    raise ShapeMismatch(f"{where}[{i}][{j}]: non-finite number")
                m[i, j] = complex(entry[0], entry[1])
        mats.append(m)
    return QuantumOperation(tuple(mats))


def dumps_operation(op: QuantumOperation) -> str:
    # json uses repr() for floats: shortest string that round-trips exactly
    return json.dumps(operation_to_dict(op), allow_nan=False)


def loads_operation(text: str) -> QuantumOperation:
    """Parse the JSON wire format.

    Raises:
        json.JSONDecodeError: malformed JSON (carries line/column).
        ShapeMismatch: well-formed JSON with the wrong structure.
        ValueError: NaN/Infinity literals.
    """
    return operation_from_dict(json.loads(text, parse_constant=_reject_constant))
