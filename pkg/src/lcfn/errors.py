"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class LcfnError(Exception):
    """Base class for all errors raised by lcfn."""

    exit_code = 1


class FieldMismatchError(LcfnError, TypeError):
    """Two series live in different coefficient fields (exact vs approx)."""


class TruncationError(LcfnError, IndexError):
    """An index was requested beyond the stored truncation order."""


class DomainError(LcfnError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""

    exit_code = 2


class PoleError(DomainError):
    """Evaluation at (or too close to) a pole.

    ``residue`` carries the residue when it is known.
    """

    def __init__(self, message: str, residue=None):
        super().__init__(message)
        self.residue = residue


class ToleranceError(LcfnError, ArithmeticError):
    """A series or quadrature failed to reach the requested tolerance."""

    exit_code = 3


class QuadratureError(ToleranceError):
    pass


class CoefficientFileError(LcfnError, ValueError):
    """Malformed coefficient file."""


class UnknownFunctionError(LcfnError, KeyError):
    pass


class ValidationError(LcfnError):
    """A closed form disagrees with its truncated series."""

    exit_code = 3
