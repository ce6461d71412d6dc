"""Homogeneous operators, coefficient sources and verification reports."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Protocol

from .algebra import AlgebraKind, BasisIndex, Element, central_index
from .errors import AlgebraMismatch
from .scalar import Scalar, ZERO


class CoefficientSource(Protocol):
    """Anything that yields f(m), or ``None`` when f(m) is unknown."""

    def lookup(self, m: int) -> Optional[Scalar]:
        ...


@dataclass(frozen=True)
class TableSource:
    """Explicit values on ``[lo, hi]``; missing in-domain entries are zero."""
    lo: int
    hi: int
    values: dict[int, Scalar] = field(default_factory=dict)

    def lookup(self, m: int) -> Optional[Scalar]:
        if m < self.lo or m > self.hi:
            return None
        return self.values.get(m, ZERO)

    def to_dict(self) -> dict:
        return {
            "domain": [self.lo, self.hi],
            "values": {str(m): str(v) for m, v in sorted(self.values.items()) if not v.is_zero},
        }


@dataclass(frozen=True)
class FamilySource:
    """Closed-form coefficient function from the family catalog. Never unknown."""
    tag: str
    label: str
    formula: Callable[[int], Scalar] = field(compare=False)

    def lookup(self, m: int) -> Optional[Scalar]:
        return self.formula(m)


@dataclass(frozen=True)
class HomogeneousOperator:
    """Degree-k operator on Witt or Virasoro.

    ``R(L_m) = f(m+k) L_{m+k} + theta * delta_{m+k,0} C`` and
    ``R(C) = mu L_k + nu * delta_{k,0} C``. ``overrides`` adds hand-written
    extra terms to individual images (used to build deliberately ungraded
    operators).
    """
    algebra: AlgebraKind
    degree: int
    coeffs: CoefficientSource
    theta: Scalar = ZERO
    mu: Scalar = ZERO
    nu: Scalar = ZERO
    overrides: dict[BasisIndex, Element] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.algebra is AlgebraKind.SL2:
            raise AlgebraMismatch("homogeneous operators live on Witt or Virasoro")
        if self.algebra is AlgebraKind.WITT and not (self.theta.is_zero and self.mu.is_zero and self.nu.is_zero):
            raise AlgebraMismatch("central parameters require the Virasoro algebra")

    def image(self, index: BasisIndex) -> Optional[Element]:
        """R applied to a basis generator, or ``None`` if a coefficient is unknown."""
        if index.algebra is not self.algebra:
            raise AlgebraMismatch(f"{index.label} is not in {self.algebra.value}")
        k = self.degree
        if index.central:
            terms = {BasisIndex(self.algebra, k): self.mu}
            if k == 0:
                terms[central_index()] = self.nu
        else:
            target = index.n + k
            value = self.coeffs.lookup(target)
            if value is None:
                return None
            terms = {BasisIndex(self.algebra, target): value}
            if self.algebra is AlgebraKind.VIRASORO and target == 0:
                terms[central_index()] = self.theta
        image = Element.from_terms(self.algebra, terms)
        extra = self.overrides.get(index)
        return image + extra if extra is not None else image

    def describe(self) -> dict:
        data = {"algebra": self.algebra.value, "kind": "homogeneous", "degree": self.degree}
        if isinstance(self.coeffs, TableSource):
            data["f"] = self.coeffs.to_dict()
        elif isinstance(self.coeffs, FamilySource):
            data["family"] = self.coeffs.label
        if self.algebra is AlgebraKind.VIRASORO:
            data.update(theta=str(self.theta), mu=str(self.mu), nu=str(self.nu))
        return data


class IdentityKind(Enum):
    """Which operator identity a verification run checks."""
    ANTI_RB = "anti_rb"
    DELTA_RB = "delta_rb"
    STRONG = "strong"
    DELTA_DERIVATION = "delta_derivation"
    JACOBI = "jacobi"

    @property
    def arity(self) -> int:
        return 3 if self in (IdentityKind.STRONG, IdentityKind.JACOBI) else 2


@dataclass(frozen=True)
class Violation:
    """A basis tuple with a nonzero residual."""
    inputs: tuple[BasisIndex, ...]
    residual: Element

    def to_dict(self) -> dict:
        return {
            "inputs": [index.label for index in self.inputs],
            "residual": self.residual.to_dict(),
        }


@dataclass
class VerificationReport:
    """Outcome of one windowed identity check."""
    kind: IdentityKind
    window: int
    checked: int = 0
    skipped: int = 0
    violations: list[Violation] = field(default_factory=list)
    delta: Scalar = Scalar(-1)

    def __post_init__(self):
        self.violations.sort(key=lambda v: v.inputs)

    @property
    def status(self) -> str:
        return "fail" if self.violations else "pass"

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "identity": self.kind.value,
            "delta": str(self.delta),
            "window": self.window,
            "status": self.status,
            "checked": self.checked,
            "skipped": self.skipped,
            "violations": [v.to_dict() for v in self.violations],
        }
