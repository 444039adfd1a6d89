"""Exception and warning types raised across the package."""


class MLStokesError(Exception):
    """Base class for all errors raised by mlstokes."""


class NonFiniteResult(MLStokesError, ArithmeticError):
    """An operation produced an infinity or NaN."""


class DivisionBySingularSeries(MLStokesError, ZeroDivisionError):
    pass


class CompositionRequiresZeroConstantTerm(MLStokesError, ValueError):
    pass


class NotRevertible(MLStokesError, ValueError):
    pass


class GammaPole(MLStokesError, ValueError):
    """Gamma evaluated at a nonpositive integer."""


class PrecisionBudgetExceeded(MLStokesError):
    """The working precision needed to certify a result exceeds the cap."""

    def __init__(self, required: int, cap: int):
        super().__init__(f"need {required} working digits, cap is {cap}")
        self.required = required
        self.cap = cap


class TruncationOverflow(MLStokesError):
    pass


class PoleTooCloseToSaddle(MLStokesError):
    """|u0| is too small for coefficient extraction at the requested precision."""


class TableOrderUnavailable(MLStokesError, ValueError):
    pass


class DomainError(MLStokesError, ValueError):
    pass


class ValidityWarning(UserWarning):
    """Inputs lie outside the range where the expansion is proven valid."""
