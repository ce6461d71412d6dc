"""Basis indices, sparse elements and brackets for Witt, Virasoro and sl2."""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Iterator, Mapping, Optional

from .errors import AlgebraMismatch, ParseError
from .scalar import Number, Scalar, ZERO


class AlgebraKind(Enum):
    """The three Lie algebras the toolkit knows about."""
    WITT = "witt"
    VIRASORO = "virasoro"
    SL2 = "sl2"

    @property
    def graded(self) -> bool:
        return self is not AlgebraKind.SL2


@total_ordering
@dataclass(frozen=True)
class BasisIndex:
    """A basis generator: ``L_n``, the central ``C``, or ``e_i`` of sl2."""
    algebra: AlgebraKind
    n: int = 0
    central: bool = False

    def __post_init__(self):
        if self.central and self.algebra is not AlgebraKind.VIRASORO:
            raise AlgebraMismatch(f"{self.algebra.value} has no central generator")
        if self.algebra is AlgebraKind.SL2 and self.n not in (1, 2, 3):
            raise AlgebraMismatch(f"sl2 generator index must be 1..3, got {self.n}")

    def _key(self) -> tuple:
        # Central C sorts after every L_n.
        return (self.central, self.n)

    def __lt__(self, other: "BasisIndex") -> bool:
        if not isinstance(other, BasisIndex):
            return NotImplemented
        return self._key() < other._key()

    @property
    def grade(self) -> Optional[int]:
        """Degree in the Z-grading; ``C`` sits in degree 0, sl2 is ungraded."""
        if self.algebra is AlgebraKind.SL2:
            return None
        return 0 if self.central else self.n

    @property
    def label(self) -> str:
        if self.central:
            return "C"
        if self.algebra is AlgebraKind.SL2:
            return f"e{self.n}"
        return f"L{self.n}"

    def __str__(self) -> str:
        return self.label

    @classmethod
    def parse(cls, algebra: AlgebraKind, text: str) -> "BasisIndex":
        """Inverse of ``label``: ``L-2``, ``C`` or ``e3``."""
        if text == "C":
            return central_index(algebra)
        prefix = "e" if algebra is AlgebraKind.SL2 else "L"
        if not text.startswith(prefix):
            raise ParseError(f"expected basis label starting with {prefix!r}", text, 0)
        body = text[1:]
        digits = body[1:] if body.startswith("-") else body
        if not digits.isdigit():
            raise ParseError("expected integer subscript", text, 1)
        return cls(algebra, int(body))


def L(n: int, algebra: AlgebraKind = AlgebraKind.WITT) -> BasisIndex:
    return BasisIndex(algebra, n)


def central_index(algebra: AlgebraKind = AlgebraKind.VIRASORO) -> BasisIndex:
    return BasisIndex(algebra, 0, central=True)


def e(i: int) -> BasisIndex:
    return BasisIndex(AlgebraKind.SL2, i)


def sl2_basis() -> list[BasisIndex]:
    return [e(1), e(2), e(3)]


@dataclass(frozen=True)
class Element:
    """Finitely supported linear combination; ``terms`` is sorted and zero-free."""
    algebra: AlgebraKind
    terms: tuple[tuple[BasisIndex, Scalar], ...] = ()

    @classmethod
    def from_terms(cls, algebra: AlgebraKind,
                   terms: Mapping[BasisIndex, Number] | Iterable[tuple[BasisIndex, Number]]) -> "Element":
        """Build the canonical form, summing repeated indices and dropping zeros."""
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[BasisIndex, Scalar] = {}
        for index, coeff in items:
            if index.algebra is not algebra:
                raise AlgebraMismatch(f"{index.label} does not belong to {algebra.value}")
            acc[index] = acc.get(index, ZERO) + Scalar.of(coeff)
        return cls(algebra, tuple(sorted((i, c) for i, c in acc.items() if not c.is_zero)))

    @classmethod
    def zero(cls, algebra: AlgebraKind) -> "Element":
        return cls(algebra)

    @classmethod
    def basis(cls, index: BasisIndex, coeff: Number = 1) -> "Element":
        return cls.from_terms(index.algebra, {index: coeff})

    def __iter__(self) -> Iterator[tuple[BasisIndex, Scalar]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[BasisIndex]:
        return [index for index, _ in self.terms]

    def coefficient(self, index: BasisIndex) -> Scalar:
        for i, c in self.terms:
            if i == index:
                return c
        return ZERO

    def _check(self, other: "Element"):
        if not isinstance(other, Element):
            raise TypeError(f"expected Element, got {type(other).__name__}")
        if other.algebra is not self.algebra:
            raise AlgebraMismatch(f"{self.algebra.value} vs {other.algebra.value}")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        return Element.from_terms(self.algebra, list(self.terms) + list(other.terms))

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __neg__(self) -> "Element":
        return Element(self.algebra, tuple((i, -c) for i, c in self.terms))

    def scale(self, factor: Number) -> "Element":
        factor = Scalar.of(factor)
        if factor.is_zero:
            return Element.zero(self.algebra)
        return Element(self.algebra, tuple((i, c * factor) for i, c in self.terms))

    def __rmul__(self, factor: Number) -> "Element":
        return self.scale(factor)

    def to_dict(self) -> dict[str, str]:
        """Index label to scalar string, in canonical index order."""
        return {index.label: str(coeff) for index, coeff in self.terms}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{i.label}" for i, c in self.terms)


def add(x: Element, y: Element) -> Element:
    return x + y


def scale(c: Number, x: Element) -> Element:
    return x.scale(c)


_SL2_TABLE: dict[tuple[int, int], tuple[int, int]] = {
    (1, 2): (3, 1),
    (1, 3): (1, 2),
    (2, 3): (2, -2),
}


@lru_cache(maxsize=65536)
def bracket_basis(x: BasisIndex, y: BasisIndex) -> Element:
    """Structure constants on a pair of basis generators."""
    if x.algebra is not y.algebra:
        raise AlgebraMismatch(f"{x.label} and {y.label} live in different algebras")
    algebra = x.algebra
    if x == y or x.central or y.central:
        return Element.zero(algebra)

    if algebra is AlgebraKind.SL2:
        sign = 1
        i, j = x.n, y.n
        if i > j:
            i, j, sign = j, i, -1
        target, coeff = _SL2_TABLE[(i, j)]
        return Element.basis(e(target), sign * coeff)

    m, n = x.n, y.n
    terms: dict[BasisIndex, Number] = {BasisIndex(algebra, m + n): m - n}
    if algebra is AlgebraKind.VIRASORO and m + n == 0:
        terms[central_index()] = Fraction(m ** 3 - m, 12)
    return Element.from_terms(algebra, terms)


def bracket(x: Element, y: Element) -> Element:
    """Bilinear extension of the basis brackets."""
    if x.algebra is not y.algebra:
        raise AlgebraMismatch(f"cannot bracket {x.algebra.value} with {y.algebra.value}")
    pieces: list[tuple[BasisIndex, Scalar]] = []
    for i, a in x.terms:
        for j, b in y.terms:
            coeff = a * b
            for index, c in bracket_basis(i, j).terms:
                pieces.append((index, coeff * c))
    return Element.from_terms(x.algebra, pieces)
