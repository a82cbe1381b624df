"""Numerical failures that are not caused by invalid input.

Invalid input raises ``django.core.exceptions.ValidationError`` from the
domain types' ``clean()``; these exceptions cover what can still go wrong
once the input has been accepted.
"""


class NumericalError(ArithmeticError):
    """Base class for numerical failures."""


class ConditioningError(NumericalError):
    """A denominator or transfer system fell below its conditioning guard."""


class SchurParameterError(NumericalError):
    """A Schur parameter reached the unit circle during the Schur algorithm."""

    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"|r_{index}| = {abs(value):.15g} is not strictly inside the unit disk")


class DivisibilityError(NumericalError):
    """The numerator of h_n - r_n was not divisible by z to tolerance."""


class LatticeSearchError(NumericalError):
    """No (j, t) candidate gave a positive lattice decomposition."""

    def __init__(self, message, best_j=None, best_t=None):
        self.best_j = best_j
        self.best_t = best_t
        super().__init__(message)
