"""Exception types raised across the package."""


class FidelityBalanceError(ValueError):
    """Base class for all errors raised by this package."""


class NonSquare(FidelityBalanceError):
    pass


class NotHermitian(FidelityBalanceError):
    pass


class NoConvergence(FidelityBalanceError, ArithmeticError):
    pass


class ShapeMismatch(FidelityBalanceError):
    pass


class DimMismatch(FidelityBalanceError):
    pass


class IndexOutOfRange(FidelityBalanceError, IndexError):
    pass


class ZeroProbabilityOutcome(FidelityBalanceError):
    pass


class InvalidOperation(FidelityBalanceError):
    """Kraus set violates the completeness relation beyond tolerance."""


class DomainError(FidelityBalanceError):
    pass


class InvalidSpectrum(FidelityBalanceError):
    pass
