"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class DimgroupError(Exception):
    """Base class for all package errors."""


class DivisionByZero(DimgroupError, ZeroDivisionError):
    pass


class MixedFields(DimgroupError, ValueError):
    """Operands live in different quadratic fields."""


class ValidationError(DimgroupError, ValueError):
    """An input violates a named invariant."""

    def __init__(self, message: str, invariant: str | None = None) -> None:
        super().__init__(message)
        self.invariant = invariant


class ParseError(ValidationError):
    """Malformed text input, with the offending position when known."""

    def __init__(
        self, message: str, line: int | None = None, column: int | None = None, source: str | None = None
    ) -> None:
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where, invariant="syntax")
        self.detail = message
        self.line = line
        self.column = column
        self.source = source


class OutOfBranchDomain(ValidationError):
    pass


class OutOfDomain(ValidationError):
    pass


class InvalidSlope(ValidationError):
    pass


class InvalidLengths(ValidationError):
    pass


class NotInsideBranch(ValidationError):
    pass


class BlocksNotPartition(ValidationError):
    pass


class ValidationFailed(DimgroupError):
    """A computed structure failed its own soundness check."""


class NotEventuallySurjective(DimgroupError):
    pass


class RangeNotSingleInterval(DimgroupError):
    pass


class BoundExceeded(DimgroupError):
    def __init__(self, message: str, bound: int) -> None:
        super().__init__(message)
        self.bound = bound


class ConsistencyFailure(DimgroupError):
    """Two independent computations of the same quantity disagree."""
