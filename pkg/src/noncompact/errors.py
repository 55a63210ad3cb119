"""Exception hierarchy shared by every module."""

from __future__ import annotations


class NoncompactError(Exception):
    """Base class for all library errors."""


class DomainError(NoncompactError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NoClosedFormError(DomainError):
    """Requested a closed-form modulus that has no known expression."""


class BudgetError(NoncompactError):
    """A combinatorial oracle was asked to exceed its enumeration budget."""


class NumericError(NoncompactError, ArithmeticError):
    """An iterative solver stopped before reaching its tolerance.

    ``lower`` and ``upper`` bracket the true optimum; ``best`` carries the
    best primal object found (solver specific), so callers can still use it.
    """

    def __init__(self, message: str, lower: float, upper: float, best=None):
        super().__init__(f"{message} (bracket [{lower:.12g}, {upper:.12g}])")
        self.lower = lower
        self.upper = upper
        self.best = best


class ParseError(NoncompactError, ValueError):
    """A set expression could not be parsed; ``position`` is 0-based."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position
