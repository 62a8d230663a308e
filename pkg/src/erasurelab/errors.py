"""Semantic exceptions shared across the package."""


class ErasureLabError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ErasureLabError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class SideConditionError(ErasureLabError, ValueError):
    """A certificate side condition fails.

    The message spells out the failing inequality with the numbers
    plugged in, so callers can see exactly which requirement broke.
    """

    def __init__(self, inequality: str):
        super().__init__(f"side condition violated: {inequality}")
        self.inequality = inequality


class ConvergenceError(ErasureLabError, RuntimeError):
    """An iterative routine exhausted its iteration budget."""


class ComputationError(ErasureLabError, ArithmeticError):
    """A computation produced no usable value (e.g. an empty supremum)."""
