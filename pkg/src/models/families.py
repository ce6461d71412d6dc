"""Family tags, family parameter records and solver candidates."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .scalar import Scalar, ONE, ZERO


class WittFamilyTag(Enum):
    """Homogeneous operator families on the Witt algebra."""
    I = "I"                              # alpha at index -k
    II = "II"                            # degree 2k: values at 0 and -k
    III_THM = "III_thm"                  # coefficient (k-2m)/(m+2k) on lZ
    III_PROP4 = "III_prop4"              # coefficient (k-2m)/(m+k) on lZ
    DEG0 = "Deg0"                        # degree 0, alpha at index 0
    SUPPORT_ORIGIN = "SupportOrigin"     # alpha at index 0, any degree
    SUPPORT_MINUS_K = "SupportMinusK"    # f(0)=0 branch, alpha at index -k


class VirFamilyTag(Enum):
    """Homogeneous operator families on the Virasoro algebra."""
    DEG0 = "Deg0"
    I = "I"
    II = "II"
    III = "III"
    IV_PRINTED = "IV_printed"
    IV_SIGNFLIP = "IV_signflip"


class Sl2Tag(Enum):
    """The ten sl2 matrix patterns of the classification."""
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"
    F5 = "F5"
    F6 = "F6"
    F7 = "F7"
    F8 = "F8"
    F9 = "F9"
    F10 = "F10"


# Families whose classification lists them as strong.
STRONG_LISTED = frozenset({Sl2Tag.F1, Sl2Tag.F2, Sl2Tag.F5, Sl2Tag.F6})


@dataclass(frozen=True)
class WittFamily:
    """A Witt family instance.

    ``k`` is the operator degree, except for ``II`` where it is the
    half-degree (the operator has degree ``2k``). ``param`` is the free
    scalar alpha, beta or gamma.
    """
    tag: WittFamilyTag
    k: int
    param: Scalar = ONE
    l: Optional[int] = None

    @property
    def degree(self) -> int:
        return 2 * self.k if self.tag is WittFamilyTag.II else self.k

    @property
    def label(self) -> str:
        parts = [f"k={self.k}", f"param={self.param}"]
        if self.l is not None:
            parts.append(f"l={self.l}")
        return f"{self.tag.value}({', '.join(parts)})"


@dataclass(frozen=True)
class VirFamily:
    """A Virasoro family instance.

    Scalars not used by a tag stay zero: Deg0 uses alpha, theta, mu and nu;
    I uses theta; II uses alpha; III uses beta with theta as the central
    coefficient; IV uses mu. ``k`` is the half-degree for III.
    """
    tag: VirFamilyTag
    k: int = 0
    alpha: Scalar = ZERO
    beta: Scalar = ZERO
    theta: Scalar = ZERO
    mu: Scalar = ZERO
    nu: Scalar = ZERO

    @property
    def degree(self) -> int:
        return 2 * self.k if self.tag is VirFamilyTag.III else self.k

    @property
    def label(self) -> str:
        params = {"alpha": self.alpha, "beta": self.beta, "theta": self.theta,
                  "mu": self.mu, "nu": self.nu}
        shown = ", ".join(f"{name}={value}" for name, value in params.items() if not value.is_zero)
        return f"{self.tag.value}(k={self.k}{', ' + shown if shown else ''})"


class Normalization(Enum):
    """Which coefficient a solver candidate fixes to 1."""
    F0_IS_1 = "f0_is_1"
    FMINUSK_IS_1 = "fminusk_is_1"


class SolverBranch(Enum):
    F0_NONZERO = "f0"
    F0_ZERO = "f0zero"


@dataclass(frozen=True)
class SolutionCandidate:
    """Windowed value vector ``f(-window..window)`` solving the functional equation."""
    k: int
    window: int
    values: tuple[Scalar, ...]
    normalization: Normalization
    stable: bool = False

    def __post_init__(self):
        if len(self.values) != 2 * self.window + 1:
            raise ValueError("values must cover [-window, window]")

    def value(self, m: int) -> Scalar:
        if abs(m) > self.window:
            raise IndexError(m)
        return self.values[m + self.window]

    def support(self) -> list[int]:
        return [m for m in range(-self.window, self.window + 1) if not self.value(m).is_zero]

    def as_map(self) -> dict[int, Scalar]:
        return {m: self.value(m) for m in self.support()}

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "window": self.window,
            "normalization": self.normalization.value,
            "stable": self.stable,
            "values": {str(m): str(v) for m, v in self.as_map().items()},
        }


@dataclass
class Classification:
    """Family tags matched by a candidate. Empty ``classified_tags`` means unclassified."""
    tags: list[WittFamilyTag] = field(default_factory=list)

    @property
    def classified_tags(self) -> list[WittFamilyTag]:
        # SupportOrigin is the only tag outside the published classification.
        return [t for t in self.tags if t is not WittFamilyTag.SUPPORT_ORIGIN]

    @property
    def unclassified(self) -> bool:
        return not self.classified_tags

    def to_dict(self) -> dict:
        return {
            "tags": [t.value for t in self.tags],
            "unclassified": self.unclassified,
        }
