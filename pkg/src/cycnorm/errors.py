"""Exception hierarchy shared by every layer of the library."""


class CycNormError(Exception):
    """Base class for library errors."""


class EllMismatch(CycNormError, ValueError):
    """Operands live in different fields."""


class PreconditionError(CycNormError, ValueError):
    """An operation was called outside its domain (zero input, wild place, ...)."""


class ArithmeticOverflow(CycNormError, OverflowError):
    """Intermediate integers exceeded the configured bit bound."""


class ConditionViolated(CycNormError):
    """A prescribed-symbol family fails one of the three solvability conditions."""

    def __init__(self, condition: int, detail: str):
        self.condition = condition
        self.detail = detail
        super().__init__(f"condition ({condition}) violated: {detail}")


class SearchExhausted(CycNormError):
    """A bounded search ran out of candidates."""

    def __init__(self, stage: str, bound: int):
        self.stage = stage
        self.bound = bound
        super().__init__(f"{stage}: search exhausted after {bound} candidates")


class IsANorm(CycNormError):
    """A non-norm certificate was requested for a pair that is a norm."""
