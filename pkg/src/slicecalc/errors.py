"""Exception types raised across the package."""

from __future__ import annotations


class SliceCalcError(Exception):
    """Base class for all package errors."""


class DimensionError(SliceCalcError, ValueError):
    """Mismatched algebra sizes or operator shapes."""


class InvariantError(SliceCalcError, ValueError):
    """An argument violates a structural invariant (e.g. a non-unit imaginary unit)."""


class SingularError(SliceCalcError, ArithmeticError):
    """Inversion of a singular or ill-conditioned element."""

    def __init__(self, message: str, smallest_singular_value: float | None = None):
        super().__init__(message)
        self.smallest_singular_value = smallest_singular_value


class InvertibilityError(SingularError):
    """An operator could not be inverted within the condition-number cap."""


class SpectrumError(SingularError):
    """A point lies in (or numerically on) the S-spectrum."""


class HypothesisError(SliceCalcError):
    """A required hypothesis (commutation, distance, enclosure) does not hold."""


class DomainError(SliceCalcError, ValueError):
    """A function was evaluated outside its domain."""


class UnsupportedError(SliceCalcError, TypeError):
    """The requested combination of inputs is not supported."""


class SchemaError(SliceCalcError, ValueError):
    """Malformed JSON or config input."""
