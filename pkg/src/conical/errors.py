"""Exception hierarchy for the conical package."""


class ConicalError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(ConicalError, ValueError):
    """Operands have incompatible or unsupported dimensions."""


class DomainError(ConicalError, ValueError):
    """An argument lies outside the domain of the operation."""


class ZeroTraceError(DomainError):
    """A trace that must be positive is (numerically) zero."""


class NumericalError(ConicalError, ArithmeticError):
    """An eigensolver failed or produced non-finite output."""


class NotADesignError(ConicalError, ValueError):
    """The family of operators does not verify as a conical design."""


class InvalidProjectorError(ConicalError, ValueError):
    """A matrix fails one or more of the design-projector conditions.

    The violated conditions are kept in ``violations`` as human-readable
    strings.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid projector")


class NoDecompositionError(ConicalError, ValueError):
    """The target state has no symmetric decomposition."""


class ConstructionUnavailableError(ConicalError, RuntimeError):
    """A decomposition may exist but no available construction reaches it."""

    def __init__(self, message, kappa=None):
        self.kappa = kappa
        super().__init__(message)
