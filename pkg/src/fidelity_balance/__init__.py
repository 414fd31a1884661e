"""Trade-off between disturbance and information gain for d-level quantum operations."""
from .errors import *  # noqa: F401,F403
from .fidelity import (
    FidelityPair,
    GuessAssignment,
    McConfig,
    McEstimate,
    estimation_fidelity,
    estimation_fidelity_optimal,
    fidelity_pair,
    mc_estimation_fidelity,
    mc_moment_operator,
    mc_operation_fidelity,
    moment_operator,
    operation_fidelity,
    optimal_guesses,
)
from .frontier import (
    BoundVerdict,
    EllipseParams,
    FrontierPoint,
    GParameter,
    bound_check,
    ellipse_params,
    ellipse_residual,
    extremal_operation,
    frontier_curve,
    max_operation_fidelity,
)
from .linalg import (
    HermitianEigen,
    PolarFactors,
    adjoint,
    hermitian_eigensystem,
    mat_trace,
    operator_norm,
    polar_decompose,
)
from .operations import (
    OutcomeResult,
    PureState,
    QuantumOperation,
    SingularSpectra,
    apply_outcome,
    canonicalize,
    identity_operation,
    outcome_probability,
    projective_operation,
    random_operation,
    sample_haar_state,
    singular_spectra,
    validate,
)
from .teleport import (
    SchmidtSpectrum,
    optimal_schmidt,
    teleport_estimation_fidelity,
    teleport_fidelity,
    teleport_tradeoff_check,
)

__version__ = "0.1.0"
