"""Exact Gaussian-rational scalars.

Every coefficient in the toolkit is a ``Scalar``: a complex number whose real
and imaginary parts are ``fractions.Fraction`` values. ``Fraction`` keeps
itself in lowest terms with a positive denominator, so equality and hashing
are component-wise on canonical forms.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DivisionByZero, ParseError

Number = Union[int, Fraction, "Scalar"]


@dataclass(frozen=True)
class Scalar:
    """A Gaussian rational ``re + im*i``."""
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        # Accept ints for convenience; store Fractions only.
        if not isinstance(self.re, Fraction):
            object.__setattr__(self, "re", Fraction(self.re))
        if not isinstance(self.im, Fraction):
            object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, value: Number) -> "Scalar":
        """Coerce an int, Fraction or Scalar."""
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value))
        raise TypeError(f"cannot coerce {type(value).__name__} to Scalar")

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def inv(self) -> "Scalar":
        """Multiplicative inverse; raises ``DivisionByZero`` for zero."""
        if self.is_zero:
            raise DivisionByZero("inverse of zero scalar")
        if self.im == 0:
            return Scalar(1 / self.re)
        norm = self.re * self.re + self.im * self.im
        return Scalar(self.re / norm, -self.im / norm)

    def __add__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        other = Scalar.of(other)
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        other = Scalar.of(other)
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return Scalar.of(other) - self

    def __mul__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        other = Scalar.of(other)
        if self.im == 0 and other.im == 0:
            return Scalar(self.re * other.re)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        return self * Scalar.of(other).inv()

    def __rtruediv__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return Scalar.of(other) * self.inv()

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im)

    def __pos__(self) -> "Scalar":
        return self

    def __pow__(self, exponent: int) -> "Scalar":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inv() ** (-exponent)
        result = Scalar(Fraction(1))
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return not self.is_zero

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)!r})"


ZERO = Scalar()
ONE = Scalar(Fraction(1))
I = Scalar(Fraction(0), Fraction(1))


def _format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_scalar(value: Scalar) -> str:
    """Canonical text form, e.g. ``0``, ``1/2``, ``-3/4i``, ``1-2i``."""
    if value.im == 0:
        return _format_rational(value.re)
    imaginary = _format_rational(value.im) + "i"
    if value.re == 0:
        return imaginary
    if value.im > 0:
        return f"{_format_rational(value.re)}+{imaginary}"
    return f"{_format_rational(value.re)}{imaginary}"


class _Scanner:
    """Single-pass reader for the scalar grammar."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def fail(self, message: str):
        raise ParseError(message, self.text, self.pos)

    def digits(self) -> int:
        start = self.pos
        while self.peek().isdigit() and self.peek().isascii():
            self.pos += 1
        if start == self.pos:
            self.fail("expected digits")
        return int(self.text[start:self.pos])

    def rational(self) -> Fraction:
        negative = False
        if self.peek() == "-":
            negative = True
            self.pos += 1
        numerator = self.digits()
        denominator = 1
        if self.peek() == "/":
            self.pos += 1
            start = self.pos
            denominator = self.digits()
            if denominator == 0:
                self.pos = start
                self.fail("zero denominator")
        value = Fraction(numerator, denominator)
        return -value if negative else value

    def expect(self, char: str):
        if self.peek() != char:
            self.fail(f"expected {char!r}")
        self.pos += 1

    def expect_end(self):
        if not self.at_end():
            self.fail("unexpected trailing input")


def parse_scalar(text: str) -> Scalar:
    """Parse ``rat``, ``rat i`` or ``rat (+|-) rat i`` with no whitespace."""
    if not isinstance(text, str):
        raise ParseError("scalar must be a string", repr(text), 0)
    scanner = _Scanner(text)
    first = scanner.rational()
    if scanner.at_end():
        return Scalar(first)
    if scanner.peek() == "i":
        scanner.pos += 1
        scanner.expect_end()
        return Scalar(Fraction(0), first)
    sign = scanner.peek()
    if sign not in ("+", "-"):
        scanner.fail("expected '+', '-' or 'i'")
    scanner.pos += 1
    second = scanner.rational()
    scanner.expect("i")
    scanner.expect_end()
    return Scalar(first, second if sign == "+" else -second)
