"""Exact 3x3 matrices over the Gaussian rationals, used as sl2 operators.

Row ``i`` holds the coordinates of ``R(e_{i+1})``:
``R(e_i) = sum_j rows[i][j] e_j``. Entries are named as in the sl2
classification, row by row: ``a b c / d g h / k l m``.
"""

from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import AlgebraKind, BasisIndex, Element, e
from .errors import AlgebraMismatch, SingularMatrix
from .scalar import Number, Scalar, ZERO, ONE, parse_scalar

ENTRY_NAMES = ("a", "b", "c", "d", "g", "h", "k", "l", "m")


@dataclass(frozen=True)
class Matrix3:
    """A 3x3 matrix with ``Scalar`` entries."""
    rows: tuple[tuple[Scalar, Scalar, Scalar], ...]

    def __post_init__(self):
        if len(self.rows) != 3 or any(len(row) != 3 for row in self.rows):
            raise ValueError("Matrix3 needs exactly three rows of three entries")
        object.__setattr__(
            self, "rows", tuple(tuple(Scalar.of(x) for x in row) for row in self.rows)
        )

    @classmethod
    def of(cls, rows: Sequence[Sequence[Number]]) -> "Matrix3":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def parse(cls, rows: Sequence[Sequence[str]]) -> "Matrix3":
        return cls.of([[parse_scalar(x) for x in row] for row in rows])

    @classmethod
    def from_entries(cls, entries: Iterable[Number]) -> "Matrix3":
        """Build from the nine entries ``a, b, c, d, g, h, k, l, m``."""
        flat = list(entries)
        return cls.of([flat[0:3], flat[3:6], flat[6:9]])

    @classmethod
    def identity(cls) -> "Matrix3":
        return cls.of([[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    @classmethod
    def zero(cls) -> "Matrix3":
        return cls.of([[0] * 3] * 3)

    def __getitem__(self, position: tuple[int, int]) -> Scalar:
        i, j = position
        return self.rows[i][j]

    def entries(self) -> tuple[Scalar, ...]:
        return tuple(x for row in self.rows for x in row)

    def named(self) -> dict[str, Scalar]:
        return dict(zip(ENTRY_NAMES, self.entries()))

    def image(self, index: BasisIndex) -> Element:
        """R(e_i) under the row-as-image convention."""
        if index.algebra is not AlgebraKind.SL2:
            raise AlgebraMismatch(f"{index.label} is not an sl2 generator")
        row = self.rows[index.n - 1]
        return Element.from_terms(AlgebraKind.SL2, {e(j + 1): row[j] for j in range(3)})

    def __matmul__(self, other: "Matrix3") -> "Matrix3":
        return Matrix3.of([
            [sum((self.rows[i][t] * other.rows[t][j] for t in range(3)), ZERO) for j in range(3)]
            for i in range(3)
        ])

    def scale(self, factor: Number) -> "Matrix3":
        return Matrix3.of([[x * factor for x in row] for row in self.rows])

    def det(self) -> Scalar:
        (a, b, c), (d, g, h), (k, l, m) = self.rows
        return a * (g * m - h * l) - b * (d * m - h * k) + c * (d * l - g * k)

    def adjugate(self) -> "Matrix3":
        (a, b, c), (d, g, h), (k, l, m) = self.rows
        return Matrix3.of([
            [g * m - h * l, c * l - b * m, b * h - c * g],
            [h * k - d * m, a * m - c * k, c * d - a * h],
            [d * l - g * k, b * k - a * l, a * g - b * d],
        ])

    def inverse(self) -> "Matrix3":
        """Adjugate over determinant; ``SingularMatrix`` when det is zero."""
        det = self.det()
        if det.is_zero:
            raise SingularMatrix("matrix has zero determinant")
        return self.adjugate().scale(det.inv())

    @property
    def is_identity(self) -> bool:
        return all(
            self.rows[i][j] == (ONE if i == j else ZERO) for i in range(3) for j in range(3)
        )

    def describe(self) -> dict:
        return {"algebra": "sl2", "kind": "matrix", "rows": self.to_list()}

    def to_list(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.rows]

    def __str__(self) -> str:
        return "(" + "; ".join(", ".join(str(x) for x in row) for row in self.rows) + ")"
