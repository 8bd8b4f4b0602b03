"""Exception types shared across the package."""


class GspMziError(Exception):
    """Base class for all package errors."""


class ShapeMismatchError(GspMziError, ValueError):
    """Binary series operation on operands with different shapes."""


class SingularSeriesError(GspMziError, ValueError):
    """Fractional power of a series whose constant term vanishes."""


class DomainError(GspMziError, ValueError):
    """Input is structurally valid but outside the supported domain."""


class NumericFailureError(GspMziError, ArithmeticError):
    """Evaluation produced a non-finite or non-convergent result."""


class CutoffOverflowError(NumericFailureError):
    """Requested accuracy needs a Fock cutoff above the hard ceiling."""
