"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class RegsingError(Exception):
    """Base class for every error raised by the package."""


class DomainError(RegsingError, ValueError):
    """An argument violates a documented precondition."""


class MathError(RegsingError):
    """The input is well formed but mathematically outside the solvers' reach."""


class IrregularSingularity(MathError):
    """The initial form has lower order than the operator."""


class NonRationalExponent(MathError):
    """A characteristic-zero local exponent is not a rational number."""


class BadPrime(MathError):
    """Reduction modulo p is undefined or loses the operator's order or regularity."""


class IncompleteSplitting(MathError):
    """The indicial polynomial does not split within the allowed extension degree."""

    def __init__(self, message: str, cofactor=None):
        super().__init__(message)
        self.cofactor = cofactor


class ParseError(RegsingError, ValueError):
    """Syntax error in an operator or polynomial expression."""

    def __init__(self, message: str, pos: int | None = None, source: str | None = None):
        self.pos = pos
        self.source = source
        if pos is not None:
            message = f"{message} at position {pos}"
            if source is not None:
                message += f"\n  {source}\n  {' ' * pos}^"
        super().__init__(message)
