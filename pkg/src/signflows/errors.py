"""Exception types shared by all signflows modules."""


class SignflowsError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameter(SignflowsError):
    """An argument is outside the documented domain of an operation."""


class InvariantViolation(SignflowsError):
    """A value object would violate its structural constraints."""


class DimensionTooLarge(SignflowsError):
    """A dense 2^n table would exceed the configured dimension limit."""


class BudgetExceeded(SignflowsError):
    """An exact computation would exceed the configured state/enumeration budget."""


class ParityMismatch(SignflowsError):
    """Two lattice maps cannot be composed because their parities disagree."""
