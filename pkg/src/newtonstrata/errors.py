class NewtonStrataError(Exception):
    """Base class for errors raised by this package."""


class DatumError(NewtonStrataError, ValueError):
    """Invalid or unsupported root datum."""


class CoweightError(NewtonStrataError, ValueError):
    """A cocharacter fails a precondition (integrality, dominance, invariance)."""


class NotComparableError(NewtonStrataError, ValueError):
    pass


class InvariantViolation(NewtonStrataError, AssertionError):
    """A structural identity that the theory guarantees did not hold.

    Seeing this means an enumeration or formula bug, not bad input.
    """


class SingularMatrixError(NewtonStrataError, ValueError):
    pass


class SupportCeilingError(NewtonStrataError, RuntimeError):
    pass


class NonStabilizingError(NewtonStrataError, RuntimeError):
    pass


class RejectionBudgetError(NewtonStrataError, RuntimeError):
    pass


class FormulaDomainWarning(UserWarning):
    """The floor-sum length formula is evaluated outside the data where it is known to hold."""
