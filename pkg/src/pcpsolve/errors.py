"""Exception hierarchy shared by the solver modules."""

from __future__ import annotations


class PCPError(Exception):
    """Base class for every error raised by pcpsolve."""


class RingMismatchError(PCPError, TypeError):
    """Operands live in different polynomial rings."""


class DomainError(PCPError, ValueError):
    """An argument lies outside the domain of an operation."""


class SingularMatrixError(DomainError):
    """A change-of-variables matrix is not invertible.

    ``column`` is the pivot column where exact elimination found no
    nonzero entry.
    """

    def __init__(self, message: str, column: int | None = None):
        super().__init__(message)
        self.column = column


class NotD0Error(DomainError):
    """The ideal <x_i f_i> is positive dimensional.

    ``witness`` is the index of a variable with no pure power among the
    leading monomials of the Groebner basis.
    """

    def __init__(self, message: str, witness: int | None = None):
        super().__init__(message)
        self.witness = witness


class ShapeSearchExhausted(PCPError):
    """No change of variables put the radical ideal in shape position."""


class CertificationError(PCPError):
    """An enumerated point failed its interval residual certificate."""


class ParseError(PCPError, ValueError):
    """Malformed polynomial expression; ``offset`` is the byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
