"""Exception types shared across the package."""


class BetaminError(Exception):
    """Base class for all package errors."""


class BracketError(BetaminError):
    """A root bracket does not satisfy the required sign condition."""


class PrecisionExhausted(BetaminError):
    """A digit decision fell inside the accumulated error bound of a
    boundary and could not be resolved at the maximum working precision.

    Callers may retry with a higher ``max_precision``.
    """

    def __init__(self, message, step=None, precision=None):
        super().__init__(message)
        self.step = step
        self.precision = precision


class HorizonTooShort(BetaminError):
    """A lexicographic comparison or table build needed more digits of the
    expansion of unity than were computed."""


class BudgetExhausted(BetaminError):
    """A configurable resource cap (steps, sequences) was hit.

    The partial result, when available, is attached as ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class IncompleteBlock(BetaminError):
    """A switching signal does not end with a complete block (trailing
    symbol-1 entries after the last symbol 2)."""


class UsageError(BetaminError):
    """Invalid CLI or API usage (maps to exit code 64)."""
