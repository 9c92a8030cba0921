"""Exception types shared across the package."""


class FreeLocusError(Exception):
    """Base class for package-specific errors."""


class ParseError(FreeLocusError):
    """Raised on malformed expression or scalar text; carries a position."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class NotRegularAtZero(FreeLocusError):
    """An inverse node's argument vanishes at the origin."""


class NotFullMatrixAlgebra(FreeLocusError):
    """Coefficients do not generate the full matrix algebra."""


class NotSameFunction(FreeLocusError):
    """Two realizations do not describe the same function."""


class BudgetExceeded(FreeLocusError):
    """Base for randomized searches that ran out of retries."""

    def __init__(self, message, seed=None, budget=None):
        self.seed = seed
        self.budget = budget
        extra = []
        if budget is not None:
            extra.append(f"budget={budget}")
        if seed is not None:
            extra.append(f"seed={seed}")
        if extra:
            message = f"{message} ({', '.join(extra)})"
        super().__init__(message)


class SearchBudgetExceeded(BudgetExceeded):
    """A seeded search for a witness matrix ran out of retries."""


class SplittingBudgetExceeded(BudgetExceeded):
    """No separating central element was found within the retry budget."""


class InvariantViolation(FreeLocusError):
    """An internal consistency check failed; indicates a bug, not bad input."""
