"""Anti-Rota-Baxter operators on sl2: relations, pattern catalog, grid search and inverses.

Matrices follow the row-as-image convention of ``models.matrix``. The ten
patterns are written once as generic formulas over their free entries, so
the same code builds exact ``Scalar`` matrices and ``sympy`` expressions.
"""

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Optional, Sequence

import sympy as sp

from models.errors import DivisionByZero, ExcludedLocus, InvalidFamilyParams, SingularMatrix
from models.families import STRONG_LISTED, Sl2Tag
from models.matrix import Matrix3
from models.operator import IdentityKind, VerificationReport
from models.scalar import Number, Scalar, ZERO
from models.settings import DEFAULT_SETTINGS, RunSettings
from services.verification import VerificationService

logger = logging.getLogger(__name__)


RELATION_LABELS = (
    "4ah+(a+g)k",
    "4cg+(a+g)l",
    "-bd+ag+4ch+am+gm",
    "2a^2-2bd-2ck+kl+4am",
    "2ab-2bg+2cl+l^2",
    "2ac-2bh-bk+al+2cm+lm",
    "2ad-2dg-2hk-k^2",
    "2bd-2g^2+2hl-kl-4gm",
    "2cd-2gh-gk+dl-2hm-km",
)


# Pair (i, j) of basis generators whose residual coordinates give each block of three relations.
RELATION_PAIRS = ((1, 2), (1, 3), (2, 3))


def relation_polynomials(a, b, c, d, g, h, k, l, m) -> tuple:
    """The nine structure relations, grouped by the pairs (1,2), (1,3), (2,3)."""
    return (
        4 * a * h + (a + g) * k,
        4 * c * g + (a + g) * l,
        -b * d + a * g + 4 * c * h + a * m + g * m,
        2 * a * a - 2 * b * d - 2 * c * k + k * l + 4 * a * m,
        2 * a * b - 2 * b * g + 2 * c * l + l * l,
        2 * a * c - 2 * b * h - b * k + a * l + 2 * c * m + l * m,
        2 * a * d - 2 * d * g - 2 * h * k - k * k,
        2 * b * d - 2 * g * g + 2 * h * l - k * l - 4 * g * m,
        2 * c * d - 2 * g * h - g * k + d * l - 2 * h * m - k * m,
    )


def coordinate_bracket(u: Sequence, v: Sequence) -> tuple:
    """Bracket of two coordinate vectors in the basis e1, e2, e3."""
    return (
        2 * (u[0] * v[2] - u[2] * v[0]),
        2 * (u[2] * v[1] - u[1] * v[2]),
        u[0] * v[1] - u[1] * v[0],
    )


def _apply_rows(rows: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum((v[i] * rows[i][j] for i in range(3)), 0 * v[0]) for j in range(3))


def _unit(i: int, like) -> tuple:
    zero = 0 * like
    return tuple(zero + 1 if j == i else zero for j in range(3))


def coordinate_anti_rb(rows: Sequence[Sequence]) -> tuple:
    """Coordinates of ``[Rx,Ry] + R([Rx,y] + [x,Ry])`` at the pairs (1,2), (1,3), (2,3)."""
    like = rows[0][0]
    out = []
    for i, j in RELATION_PAIRS:
        x, y = _unit(i - 1, like), _unit(j - 1, like)
        rx, ry = tuple(rows[i - 1]), tuple(rows[j - 1])
        inner = tuple(p + q for p, q in zip(coordinate_bracket(rx, y), coordinate_bracket(x, ry)))
        out.extend(p + q for p, q in zip(coordinate_bracket(rx, ry), _apply_rows(rows, inner)))
    return tuple(out)


def coordinate_strong(rows: Sequence[Sequence]) -> tuple:
    """Strong residual at ``(e1, e2, e3)``; it is alternating, so this triple decides it."""
    like = rows[0][0]
    e1, e2, e3 = (_unit(i, like) for i in range(3))
    r1, r2, r3 = (tuple(r) for r in rows)
    terms = (
        coordinate_bracket(coordinate_bracket(r1, r2), e3),
        coordinate_bracket(coordinate_bracket(r2, r3), e1),
        coordinate_bracket(coordinate_bracket(r3, r1), e2),
    )
    return tuple(sum(t[j] for t in terms) for j in range(3))


@dataclass(frozen=True)
class Condition:
    """A nonvanishing side condition of a pattern."""
    label: str
    value: Callable[[dict], Any]


@dataclass(frozen=True)
class Sl2FamilyPattern:
    """One parameterized matrix shape. Free parameters are named after their entries."""
    tag: Sl2Tag
    params: tuple[str, ...]
    build: Callable[[dict], tuple]
    conditions: tuple[Condition, ...] = ()

    @property
    def strong_listed(self) -> bool:
        return self.tag in STRONG_LISTED


def _f7(p):
    b, c, d, m = p["b"], p["c"], p["d"], p["m"]
    return (0 * b, b, c,
            d, 0 * b, b * d / (4 * c),
            -(b * d) / (2 * c), -2 * c, m)


def _f8(p):
    a, l = p["a"], p["l"]
    return (a, -(l * l) / (4 * a), 0 * a,
            4 * a * a * a / (l * l), -a, 0 * a,
            -(4 * a * a) / l, l, 0 * a)


def _f9(p):
    a, b, c, d, h = p["a"], p["b"], p["c"], p["d"], p["h"]
    return (a, b, c,
            d, a, h,
            -2 * h, -2 * c, (b * d - a * a - 4 * c * h) / (2 * a))


def _f10(p):
    a, g, c = p["a"], p["g"], p["c"]
    s = a + g
    return (a, 4 * c * c * g / (s * s), c,
            a * s * s / (4 * c * c), g, s * s / (4 * c),
            -(a * s) / c, -(4 * c * g) / s, -a - g)


PATTERNS: dict[Sl2Tag, Sl2FamilyPattern] = {
    Sl2Tag.F1: Sl2FamilyPattern(
        Sl2Tag.F1, ("d", "m"),
        lambda p: (0 * p["d"], 0 * p["d"], 0 * p["d"], p["d"], 0 * p["d"], 0 * p["d"], 0 * p["d"], 0 * p["d"], p["m"]),
    ),
    Sl2Tag.F2: Sl2FamilyPattern(
        Sl2Tag.F2, ("d", "h"),
        lambda p: (0 * p["d"], 0 * p["d"], 0 * p["d"], p["d"], 0 * p["d"], p["h"], 0 * p["d"], 0 * p["d"], 0 * p["d"]),
        (Condition("h ≠ 0", lambda p: p["h"]),),
    ),
    Sl2Tag.F3: Sl2FamilyPattern(
        Sl2Tag.F3, ("b", "c"),
        lambda p: (0 * p["b"], p["b"], p["c"], 0 * p["b"], 0 * p["b"], 0 * p["b"], 0 * p["b"], 0 * p["b"], 0 * p["b"]),
        (Condition("c ≠ 0", lambda p: p["c"]),),
    ),
    Sl2Tag.F4: Sl2FamilyPattern(
        Sl2Tag.F4, ("b", "m"),
        lambda p: (0 * p["b"], p["b"], 0 * p["b"], 0 * p["b"], 0 * p["b"], 0 * p["b"], 0 * p["b"], 0 * p["b"], p["m"]),
        (Condition("b ≠ 0", lambda p: p["b"]),),
    ),
    Sl2Tag.F5: Sl2FamilyPattern(
        Sl2Tag.F5, ("d", "k", "m"),
        lambda p: (0 * p["k"], 0 * p["k"], 0 * p["k"], p["d"], 0 * p["k"], -p["k"] / 2, p["k"], 0 * p["k"], p["m"]),
        (Condition("k ≠ 0", lambda p: p["k"]),),
    ),
    Sl2Tag.F6: Sl2FamilyPattern(
        Sl2Tag.F6, ("b", "k", "m"),
        lambda p: (0 * p["k"], p["b"], 0 * p["k"], 0 * p["k"], 0 * p["k"], -p["k"] / 2, p["k"], 0 * p["k"], p["m"]),
        (Condition("b·k ≠ 0", lambda p: p["b"] * p["k"]),),
    ),
    Sl2Tag.F7: Sl2FamilyPattern(
        Sl2Tag.F7, ("b", "c", "d", "m"), _f7,
        (Condition("c ≠ 0", lambda p: p["c"]),),
    ),
    Sl2Tag.F8: Sl2FamilyPattern(
        Sl2Tag.F8, ("a", "l"), _f8,
        (Condition("a·l ≠ 0", lambda p: p["a"] * p["l"]),),
    ),
    Sl2Tag.F9: Sl2FamilyPattern(
        Sl2Tag.F9, ("a", "b", "c", "d", "h"), _f9,
        (Condition("a ≠ 0", lambda p: p["a"]),),
    ),
    Sl2Tag.F10: Sl2FamilyPattern(
        Sl2Tag.F10, ("a", "g", "c"), _f10,
        (Condition("c ≠ 0", lambda p: p["c"]), Condition("a ≠ ±g", lambda p: (p["a"] + p["g"]) * (p["a"] - p["g"]))),
    ),
}


@dataclass
class FamilyMatch:
    """Patterns through a matrix. ``boundary`` marks matches with side conditions dropped."""
    tags: list[Sl2Tag] = field(default_factory=list)
    boundary: bool = False

    @property
    def unmatched(self) -> bool:
        return not self.tags

    def to_dict(self) -> dict:
        return {"tags": [t.value for t in self.tags], "boundary": self.boundary,
                "unmatched": self.unmatched}


def _pattern_fits(pattern: Sl2FamilyPattern, matrix: Matrix3, strict: bool) -> bool:
    named = matrix.named()
    params = {name: named[name] for name in pattern.params}
    if strict and any(Scalar.of(c.value(params)).is_zero for c in pattern.conditions):
        return False
    try:
        entries = pattern.build(params)
    except ZeroDivisionError:
        return False
    return tuple(Scalar.of(x) for x in entries) == matrix.entries()


class RationalSampler:
    """Deterministic stream of small rationals: numerator in [-bound, bound], denominator in [1, bound]."""

    def __init__(self, seed: int, bound: int = 9):
        self.rng = random.Random(seed)
        self.bound = bound

    def draw(self) -> Scalar:
        numerator = self.rng.randint(-self.bound, self.bound)
        denominator = self.rng.randint(1, self.bound)
        return Scalar(Fraction(numerator, denominator))

    def params(self, names: Sequence[str]) -> dict[str, Scalar]:
        return {name: self.draw() for name in names}


@dataclass
class SampleResult:
    params: dict[str, Scalar]
    matrix: Matrix3
    relations_zero: bool
    anti_rb: VerificationReport
    strong: VerificationReport

    def to_dict(self) -> dict:
        return {
            "params": {k: str(v) for k, v in self.params.items()},
            "rows": self.matrix.to_list(),
            "relations_zero": self.relations_zero,
            "anti_rb": self.anti_rb.status,
            "strong": self.strong.status,
        }


@dataclass
class FamilyVerification:
    """Aggregate over the samples of one pattern."""
    tag: Sl2Tag
    results: list[SampleResult] = field(default_factory=list)

    @property
    def strong_listed(self) -> bool:
        return self.tag in STRONG_LISTED

    @property
    def relations_pass(self) -> int:
        return sum(r.relations_zero for r in self.results)

    @property
    def anti_rb_pass(self) -> int:
        return sum(r.anti_rb.passed for r in self.results)

    @property
    def strong_pass(self) -> int:
        return sum(r.strong.passed for r in self.results)

    @property
    def strong_falsified(self) -> int:
        return len(self.results) - self.strong_pass

    def to_dict(self) -> dict:
        data = {
            "tag": self.tag.value,
            "samples": len(self.results),
            "relations_zero": self.relations_pass,
            "anti_rb_pass": self.anti_rb_pass,
            "strong_listed": self.strong_listed,
            "strong_pass": self.strong_pass,
            "strong_falsified": self.strong_falsified,
        }
        failing = next((r for r in self.results if not r.anti_rb.passed or not r.strong.passed), None)
        if failing is not None:
            data["first_failure"] = failing.to_dict()
        return data


def _grid_rows(first_row: tuple[int, int, int], bound: int) -> list[tuple[int, ...]]:
    """All solutions with a fixed first row; relations are checked as soon as their entries are set."""
    a, b, c = first_row
    span = range(-bound, bound + 1)
    hits = []
    for d, g, h in product(span, repeat=3):
        for k in span:
            # Relations in a, d, g, h, k
            if 4 * a * h + (a + g) * k or 2 * a * d - 2 * d * g - 2 * h * k - k * k:
                continue
            for l in span:
                # Relations in a, b, c, g, l
                if 4 * c * g + (a + g) * l or 2 * a * b - 2 * b * g + 2 * c * l + l * l:
                    continue
                for m in span:
                    # Full check once m closes the matrix
                    if any(relation_polynomials(a, b, c, d, g, h, k, l, m)):
                        continue
                    hits.append((a, b, c, d, g, h, k, l, m))
    return hits


@dataclass
class GridHit:
    matrix: Matrix3
    match: FamilyMatch

    def to_dict(self) -> dict:
        return {"rows": self.matrix.to_list(), **self.match.to_dict()}


@dataclass
class GridResult:
    bound: int
    hits: list[GridHit] = field(default_factory=list)

    @property
    def flagged(self) -> list[GridHit]:
        return [hit for hit in self.hits if hit.match.unmatched]

    @property
    def boundary(self) -> list[GridHit]:
        return [hit for hit in self.hits if hit.match.boundary]

    def to_dict(self) -> dict:
        return {
            "range": self.bound,
            "candidates": (2 * self.bound + 1) ** 9,
            "hits": len(self.hits),
            "boundary_matches": len(self.boundary),
            "unmatched": [hit.to_dict() for hit in self.flagged],
            "results": [hit.to_dict() for hit in self.hits],
        }


@dataclass
class SymbolicCheck:
    tag: Sl2Tag
    relations_vanish: bool
    strong_vanishes: bool
    nonzero: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "tag": self.tag.value,
            "relations_vanish": self.relations_vanish,
            "strong_vanishes": self.strong_vanishes,
            "nonzero": list(self.nonzero),
        }


# Stated nonvanishing conditions for the invertible patterns, keyed by tag.
# The F9 entry is written in the pattern's own parameter ``a`` (the diagonal entry).
STATED_INVERTIBILITY: dict[Sl2Tag, tuple[str, Callable[[dict], Scalar]]] = {
    Sl2Tag.F6: ("b·k ≠ 0", lambda p: p["b"] * p["k"]),
    Sl2Tag.F7: ("d(b³d+8c²bm+16c⁴) ≠ 0",
                lambda p: p["d"] * (p["b"] ** 3 * p["d"] + 8 * p["c"] ** 2 * p["b"] * p["m"] + 16 * p["c"] ** 4)),
    Sl2Tag.F9: ("b²d²+8c²dg−2bdg²+g⁴−4bcdh−12cg²h+8bgh² ≠ 0",
                lambda p: (p["b"] ** 2 * p["d"] ** 2 + 8 * p["c"] ** 2 * p["d"] * p["a"]
                           - 2 * p["b"] * p["d"] * p["a"] ** 2 + p["a"] ** 4
                           - 4 * p["b"] * p["c"] * p["d"] * p["h"] - 12 * p["c"] * p["a"] ** 2 * p["h"]
                           + 8 * p["b"] * p["a"] * p["h"] ** 2)),
}


def _violating_point(tag: Sl2Tag, sampler: RationalSampler) -> Optional[dict[str, Scalar]]:
    """A point where the stated condition vanishes (family side conditions may be dropped)."""
    p = sampler.params(PATTERNS[tag].params)
    if tag is Sl2Tag.F6:
        p["k"] = ZERO
    elif tag is Sl2Tag.F7:
        p["d"] = ZERO
    else:
        a, c, h = p["a"], p["c"], p["h"]
        if a.is_zero or c.is_zero:
            return None
        # With b = 0 the stated polynomial is a^4 + 8c^2 d a - 12 c a^2 h.
        p["b"] = ZERO
        p["d"] = (12 * c * a * a * h - a ** 4) / (8 * c * c * a)
    return p


def _singular_point(tag: Sl2Tag, sampler: RationalSampler) -> Optional[dict[str, Scalar]]:
    """A point where the determinant vanishes."""
    p = sampler.params(PATTERNS[tag].params)
    if tag is Sl2Tag.F6:
        p["b"] = ZERO
    elif tag is Sl2Tag.F7:
        b, c, d = p["b"], p["c"], p["d"]
        if b.is_zero or c.is_zero or d.is_zero:
            return None
        p["m"] = -(b ** 3 * d + 16 * c ** 4) / (8 * c * c * b)
    else:
        a, c, h = p["a"], p["c"], p["h"]
        if a.is_zero or c.is_zero:
            return None
        # With b = 0 the determinant is proportional to a^4 - 4c a^2 h + 4c^2 d a.
        p["b"] = ZERO
        p["d"] = (4 * c * a * a * h - a ** 4) / (4 * c * c * a)
    return p


def _unchecked_matrix(tag: Sl2Tag, params: dict[str, Scalar]) -> Optional[Matrix3]:
    try:
        return Matrix3.from_entries(PATTERNS[tag].build(params))
    except ZeroDivisionError:
        return None


@dataclass
class InvertibilityVerdict:
    """Agreement between a stated invertibility condition and the determinant."""
    tag: Sl2Tag
    condition: str
    satisfying: int = 0
    satisfying_ok: int = 0
    violating: int = 0
    violating_singular: int = 0
    singular: int = 0
    singular_condition_zero: int = 0
    counterexample: Optional[dict] = None

    @property
    def consistent(self) -> bool:
        return (self.satisfying_ok == self.satisfying
                and self.violating_singular == self.violating
                and self.singular_condition_zero == self.singular)

    def record(self, params: dict[str, Scalar], det: Scalar, condition_value: Scalar):
        if self.counterexample is None:
            self.counterexample = {
                "params": {k: str(v) for k, v in params.items()},
                "det": str(det),
                "condition_value": str(condition_value),
            }

    def to_dict(self) -> dict:
        return {
            "tag": self.tag.value,
            "condition": self.condition,
            "satisfying": [self.satisfying_ok, self.satisfying],
            "violating_singular": [self.violating_singular, self.violating],
            "singular_condition_zero": [self.singular_condition_zero, self.singular],
            "consistent": self.consistent,
            "counterexample": self.counterexample,
        }


@dataclass(frozen=True)
class AntiDerivationMatrix:
    """``(a11 a12 a13 / a21 a11 a23 / -2a23 -2a13 -2a11)``."""
    a11: Scalar
    a12: Scalar
    a13: Scalar
    a21: Scalar
    a23: Scalar

    def matrix(self) -> Matrix3:
        return Matrix3.of([
            [self.a11, self.a12, self.a13],
            [self.a21, self.a11, self.a23],
            [self.a23 * -2, self.a13 * -2, self.a11 * -2],
        ])

    def adjugate_symbols(self) -> dict[str, Scalar]:
        a11, a12, a13, a21, a23 = self.a11, self.a12, self.a13, self.a21, self.a23
        return {
            "a'": -2 * (a11 * a11 - a13 * a23),
            "b'": 2 * (a11 * a12 - a13 * a13),
            "c'": a12 * a23 - a11 * a13,
            "d'": 2 * (a11 * a21 - a23 * a23),
            "h'": a13 * a21 - a11 * a23,
        }

    def to_dict(self) -> dict:
        return {name: str(getattr(self, name)) for name in ("a11", "a12", "a13", "a21", "a23")}


@dataclass
class BridgeReport:
    """Outcome of the derivation-to-operator bridge for one anti-derivation."""
    source: AntiDerivationMatrix
    det_formula_agrees: bool
    is_derivation: bool
    inverse_is_anti_rb: bool
    closed_form_agrees: Optional[bool]
    inverse_match: FamilyMatch
    f9_required: bool = True

    @property
    def matches_expected_pattern(self) -> bool:
        if self.f9_required:
            return Sl2Tag.F9 in self.inverse_match.tags and not self.inverse_match.boundary
        return not self.inverse_match.unmatched

    @property
    def passed(self) -> bool:
        return (self.det_formula_agrees and self.is_derivation and self.inverse_is_anti_rb
                and self.closed_form_agrees is not False and self.matches_expected_pattern)

    def to_dict(self) -> dict:
        return {
            "A": self.source.to_dict(),
            "det_formula_agrees": self.det_formula_agrees,
            "derivation": self.is_derivation,
            "inverse_anti_rb": self.inverse_is_anti_rb,
            "closed_form_agrees": self.closed_form_agrees,
            "inverse_match": self.inverse_match.to_dict(),
            "passed": self.passed,
        }


class Sl2Service:
    """Builds, samples, searches and inverts sl2 operators; defaults come from ``RunSettings``."""

    def __init__(self, verifier: Optional[VerificationService] = None,
                 settings: RunSettings = DEFAULT_SETTINGS):
        self.verifier = verifier or VerificationService()
        self.settings = settings

    @staticmethod
    def relations_residuals(matrix: Matrix3) -> tuple[Scalar, ...]:
        return relation_polynomials(*matrix.entries())

    # -- catalog ------------------------------------------------------------

    def build_sl2_family(self, tag: Sl2Tag, params: dict[str, Number]) -> Matrix3:
        """Matrix of a pattern at exact parameters; ``ExcludedLocus`` on a violated condition."""
        pattern = PATTERNS[tag]
        missing = set(pattern.params) - set(params)
        extra = set(params) - set(pattern.params)
        if missing or extra:
            raise InvalidFamilyParams(
                f"{tag.value} takes parameters {', '.join(pattern.params)}; got {', '.join(sorted(params))}"
            )
        values = {name: Scalar.of(value) for name, value in params.items()}
        for condition in pattern.conditions:
            if Scalar.of(condition.value(values)).is_zero:
                raise ExcludedLocus(condition.label, tag.value)
        return Matrix3.from_entries(pattern.build(values))

    def match_family(self, matrix: Matrix3) -> FamilyMatch:
        """Strict pattern matches, or boundary matches when no strict one exists."""
        strict = [tag for tag, pattern in PATTERNS.items() if _pattern_fits(pattern, matrix, True)]
        if strict:
            return FamilyMatch(strict)
        boundary = [tag for tag, pattern in PATTERNS.items() if _pattern_fits(pattern, matrix, False)]
        return FamilyMatch(boundary, boundary=bool(boundary))

    def sample_family(self, tag: Sl2Tag, samples: int, seed: int, bound: Optional[int] = None,
                      max_attempts: int = 100_000) -> list[tuple[dict[str, Scalar], Matrix3]]:
        """Rejection-sample parameter points off the excluded locus."""
        pattern = PATTERNS[tag]
        sampler = RationalSampler(seed, bound or self.settings.sample_bound)
        drawn: list[tuple[dict[str, Scalar], Matrix3]] = []
        attempts = 0
        while len(drawn) < samples:
            attempts += 1
            if attempts > max_attempts:
                raise InvalidFamilyParams(f"could not draw {samples} samples for {tag.value}")
            params = sampler.params(pattern.params)
            try:
                drawn.append((params, self.build_sl2_family(tag, params)))
            except (ExcludedLocus, DivisionByZero):
                continue
        return drawn

    def verify_family(self, tag: Sl2Tag, samples: Optional[int] = None, seed: Optional[int] = None,
                      bound: Optional[int] = None) -> FamilyVerification:
        """Relations, anti-RB and strong identity at seeded parameter samples."""
        samples = self.settings.samples if samples is None else samples
        seed = self.settings.seed if seed is None else seed
        if samples < 1:
            raise ValueError("samples must be at least 1")
        result = FamilyVerification(tag)
        for params, matrix in self.sample_family(tag, samples, seed, bound):
            result.results.append(SampleResult(
                params=params,
                matrix=matrix,
                relations_zero=all(r.is_zero for r in self.relations_residuals(matrix)),
                anti_rb=self.verifier.verify_identity(matrix, 1, IdentityKind.ANTI_RB),
                strong=self.verifier.verify_identity(matrix, 1, IdentityKind.STRONG),
            ))
        logger.info("%s: %d/%d anti-RB, %d/%d strong", tag.value, result.anti_rb_pass,
                    samples, result.strong_pass, samples)
        return result

    def verify_all_families(self, samples: Optional[int] = None,
                            seed: Optional[int] = None) -> list[FamilyVerification]:
        seed = self.settings.seed if seed is None else seed
        return [self.verify_family(tag, samples, seed + index) for index, tag in enumerate(Sl2Tag)]

    # -- grid ---------------------------------------------------------------

    def grid_search(self, bound: Optional[int] = None, workers: Optional[int] = None) -> GridResult:
        """Every integer matrix in ``[-bound, bound]^9`` satisfying all nine relations."""
        bound = self.settings.grid_range if bound is None else bound
        workers = self.settings.workers if workers is None else workers
        if bound < 1:
            raise ValueError("range must be at least 1")
        span = range(-bound, bound + 1)
        first_rows = list(product(span, repeat=3))
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_grid_rows, first_rows, [bound] * len(first_rows)))
        else:
            parts = [_grid_rows(row, bound) for row in first_rows]
        raw = sorted(entry for part in parts for entry in part)
        logger.info("grid range %d: %d partitions, %d hits", bound, len(first_rows), len(raw))

        result = GridResult(bound)
        for entries in raw:
            matrix = Matrix3.from_entries(entries)
            match = self.match_family(matrix)
            if match.unmatched:
                logger.warning("grid hit %s matches no pattern", matrix)
            result.hits.append(GridHit(matrix, match))
        return result

    @staticmethod
    def symbolic_family_check(tag: Sl2Tag) -> SymbolicCheck:
        """Reduce the nine relations and the strong residual of a pattern as rational functions."""
        pattern = PATTERNS[tag]
        symbols = {name: sp.Symbol(name) for name in pattern.params}
        entries = [sp.sympify(x) for x in pattern.build(symbols)]
        rows = [entries[0:3], entries[3:6], entries[6:9]]
        # Residual coordinates at (e1,e2), (e1,e3), (e2,e3), in relation order
        relations = [sp.cancel(r) for r in coordinate_anti_rb(rows)]
        strong = [sp.cancel(s) for s in coordinate_strong(rows)]
        nonzero = [label for label, r in zip(RELATION_LABELS, relations) if r != 0]
        nonzero += [f"strong[e{j + 1}]" for j, s in enumerate(strong) if s != 0]
        return SymbolicCheck(
            tag=tag,
            relations_vanish=all(r == 0 for r in relations),
            strong_vanishes=all(s == 0 for s in strong),
            nonzero=nonzero,
        )

    # -- invertibility ------------------------------------------------------

    def check_invertibility_remark(self, samples: int = 50, violating: int = 10, seed: Optional[int] = None,
                                   bound: Optional[int] = None) -> list[InvertibilityVerdict]:
        """Sample each stated invertibility condition on both sides and against singular points."""
        seed = self.settings.seed if seed is None else seed
        bound = bound or self.settings.sample_bound
        verdicts = []
        for offset, (tag, (label, stated)) in enumerate(STATED_INVERTIBILITY.items()):
            verdict = InvertibilityVerdict(tag, label)
            sampler = RationalSampler(seed + offset, bound)

            drawn = 0
            for params, matrix in self.sample_family(tag, samples * 4, seed + offset, bound):
                if drawn == samples:
                    break
                value = stated(params)
                if value.is_zero:
                    continue
                drawn += 1
                verdict.satisfying += 1
                det = matrix.det()
                if not det.is_zero and (matrix @ matrix.inverse()).is_identity:
                    verdict.satisfying_ok += 1
                else:
                    verdict.record(params, det, value)

            for collect, make in ((True, _violating_point), (False, _singular_point)):
                found = 0
                while found < violating:
                    params = make(tag, sampler)
                    matrix = _unchecked_matrix(tag, params) if params is not None else None
                    if matrix is None:
                        continue
                    found += 1
                    det, value = matrix.det(), stated(params)
                    if collect:
                        verdict.violating += 1
                        if det.is_zero:
                            verdict.violating_singular += 1
                        else:
                            verdict.record(params, det, value)
                    else:
                        verdict.singular += 1
                        if value.is_zero:
                            verdict.singular_condition_zero += 1
                        else:
                            verdict.record(params, det, value)
            if not verdict.consistent:
                logger.warning("stated invertibility condition for %s disagrees with the determinant",
                               tag.value)
            verdicts.append(verdict)
        return verdicts

    # -- anti-derivations ---------------------------------------------------

    @staticmethod
    def build_antiderivation(a11: Number, a12: Number, a13: Number, a21: Number,
                             a23: Number) -> AntiDerivationMatrix:
        return AntiDerivationMatrix(*(Scalar.of(x) for x in (a11, a12, a13, a21, a23)))

    @staticmethod
    def antideriv_det(A: AntiDerivationMatrix) -> Scalar:
        """Closed-form determinant of an anti-derivation matrix."""
        a11, a12, a13, a21, a23 = A.a11, A.a12, A.a13, A.a21, A.a23
        return (-2 * a11 ** 3 + 2 * a11 * a12 * a21 - 2 * a13 * a13 * a21
                + 4 * a11 * a13 * a23 - 2 * a12 * a23 * a23)

    def antideriv_inverse_closed_form(self, A: AntiDerivationMatrix) -> Matrix3:
        """Closed-form inverse; needs ``det != 0`` and ``a' != 0``."""
        det = self.antideriv_det(A)
        if det.is_zero:
            raise SingularMatrix("anti-derivation matrix has zero determinant")
        s = A.adjugate_symbols()
        a, b, c, d, h = s["a'"], s["b'"], s["c'"], s["d'"], s["h'"]
        if a.is_zero:
            raise DivisionByZero("closed-form inverse undefined when a' = 0")
        corner = (b * d - a * a - 4 * c * h) / (2 * a)
        return Matrix3.of([[a, b, c], [d, a, h], [-2 * h, -2 * c, corner]]).scale(det.inv())

    def bridge_check(self, A: AntiDerivationMatrix) -> BridgeReport:
        """An invertible anti-derivation must invert to an anti-RB operator of pattern F9."""
        matrix = A.matrix()
        inverse = matrix.inverse()
        closed: Optional[bool] = None
        a_prime = A.adjugate_symbols()["a'"]
        if not a_prime.is_zero:
            closed = self.antideriv_inverse_closed_form(A) == inverse
        else:
            logger.warning("a' = 0 for %s; closed-form inverse skipped", A.to_dict())
        return BridgeReport(
            source=A,
            det_formula_agrees=self.antideriv_det(A) == matrix.det(),
            is_derivation=self.verifier.verify_identity(matrix, 1, IdentityKind.DELTA_DERIVATION, -1).passed,
            inverse_is_anti_rb=self.verifier.verify_identity(inverse, 1, IdentityKind.ANTI_RB).passed,
            closed_form_agrees=closed,
            inverse_match=self.match_family(inverse),
            f9_required=not a_prime.is_zero,
        )

    def bridge_samples(self, samples: Optional[int] = None, seed: Optional[int] = None,
                       bound: Optional[int] = None) -> list[BridgeReport]:
        """Bridge checks on seeded invertible anti-derivations."""
        samples = self.settings.samples if samples is None else samples
        seed = self.settings.seed if seed is None else seed
        sampler = RationalSampler(seed, bound or self.settings.sample_bound)
        reports = []
        while len(reports) < samples:
            A = self.build_antiderivation(*(sampler.draw() for _ in range(5)))
            if self.antideriv_det(A).is_zero:
                continue
            reports.append(self.bridge_check(A))
        return reports

    def delta_bridge(self, matrix: Matrix3, delta: Number) -> tuple[bool, bool]:
        """(is a delta-derivation, inverse is a delta-RB operator) for an invertible matrix."""
        inverse = matrix.inverse()
        return (
            self.verifier.verify_identity(matrix, 1, IdentityKind.DELTA_DERIVATION, delta).passed,
            self.verifier.verify_identity(inverse, 1, IdentityKind.DELTA_RB, delta).passed,
        )
