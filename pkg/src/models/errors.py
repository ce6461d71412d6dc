"""Exception hierarchy shared by every model and service."""

from typing import Optional


class AntiRBError(Exception):
    """Base class for all toolkit errors. The CLI maps these to exit code 2."""


class DivisionByZero(AntiRBError, ZeroDivisionError):
    """Inverse of the zero scalar was requested."""


class ParseError(AntiRBError, ValueError):
    """Malformed scalar or basis-index text."""

    def __init__(self, message: str, text: str = "", position: int = 0):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class AlgebraMismatch(AntiRBError):
    """Two operands (or an operator and an element) live in different algebras."""


class InvalidFamilyParams(AntiRBError):
    """Family parameters violate the family's own invariants."""


class WindowTooSmall(AntiRBError):
    """The requested window cannot support the requested computation."""


class ExcludedLocus(AntiRBError):
    """Parameters fall on a family's excluded locus."""

    def __init__(self, condition: str, detail: Optional[str] = None):
        message = f"excluded locus: {condition}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)
        self.condition = condition


class SingularMatrix(AntiRBError):
    """A matrix with zero determinant was inverted."""


class DocumentError(AntiRBError):
    """An operator document does not match the expected schema."""
