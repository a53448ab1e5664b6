"""Exception hierarchy shared across the package."""


class DeltaLinError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(DeltaLinError, ValueError):
    """Invalid construction parameters (bad prime, reducible polynomial, ...)."""


class DomainError(DeltaLinError, ValueError):
    """Input outside the mathematical domain of an operation."""


class NotUnitError(DomainError):
    """Inversion of an element with valuation >= 1."""


class SingularMatrixError(DomainError):
    """Matrix not invertible mod p: not in GL_n."""


class PrecisionError(DeltaLinError):
    """Operation needs more known digits than the input carries."""


class AlgebraInvariantError(DeltaLinError):
    """An internal exact identity failed; signals a bug, not a user error."""
