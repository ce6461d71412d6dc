"""Family catalog for Witt and Virasoro operators, the functional equation and adjudication."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import TYPE_CHECKING, Optional

from models.algebra import AlgebraKind, Element, L
from models.errors import InvalidFamilyParams, WindowTooSmall
from models.families import (
    Classification,
    SolutionCandidate,
    SolverBranch,
    VirFamily,
    VirFamilyTag,
    WittFamily,
    WittFamilyTag,
)
from models.operator import (
    CoefficientSource,
    FamilySource,
    HomogeneousOperator,
    IdentityKind,
    VerificationReport,
    Violation,
)
from models.scalar import Scalar, ONE, ZERO
from services.verification import VerificationService

if TYPE_CHECKING:
    from services.solver import WittSolver

logger = logging.getLogger(__name__)

# Parameter samples for family verification: small rationals plus a non-real point.
PARAM_SAMPLES = (Scalar(1), Scalar(Fraction(2, 3)), Scalar(1, 1))


def _indicator(at: int, value: Scalar):
    return lambda m: value if m == at else ZERO


def _on_lattice(l: int, coefficient):
    return lambda m: coefficient(m) if m % l == 0 else ZERO


def _require(condition: bool, message: str):
    if not condition:
        raise InvalidFamilyParams(message)


@dataclass
class FamilyVerdict:
    """One family at one parameter point, checked on a window."""
    family: str
    tag: str
    report: VerificationReport
    counterexample: Optional[tuple[int, int, Scalar]] = None
    transport_agrees: Optional[bool] = None

    def to_dict(self) -> dict:
        data = {
            "family": self.family,
            "tag": self.tag,
            "status": self.report.status,
            "checked": self.report.checked,
            "skipped": self.report.skipped,
            "violation_count": len(self.report.violations),
        }
        if self.report.violations:
            data["first_violation"] = self.report.violations[0].to_dict()
        if self.counterexample is not None:
            m, n, r = self.counterexample
            data["functional_counterexample"] = {"m": m, "n": n, "residual": str(r)}
        if self.transport_agrees is not None:
            data["transport_agrees"] = self.transport_agrees
        return data


@dataclass
class AdjudicationReport:
    """Family verdicts plus solver candidates and their classification."""
    algebra: AlgebraKind
    k: int
    window: int
    verdicts: list[FamilyVerdict] = field(default_factory=list)
    candidates: list[tuple[SolutionCandidate, Classification]] = field(default_factory=list)
    missing_from_solver: list[str] = field(default_factory=list)
    iv_passing: list[str] = field(default_factory=list)

    def passing(self, tag: str) -> list[FamilyVerdict]:
        return [v for v in self.verdicts if v.tag == tag and v.report.passed]

    def failing(self, tag: str) -> list[FamilyVerdict]:
        return [v for v in self.verdicts if v.tag == tag and not v.report.passed]

    def to_dict(self) -> dict:
        data = {
            "algebra": self.algebra.value,
            "degree": self.k,
            "window": self.window,
            "families": [v.to_dict() for v in self.verdicts],
        }
        if self.algebra is AlgebraKind.WITT:
            data["solver_candidates"] = [
                {**c.to_dict(), **cls.to_dict()} for c, cls in self.candidates
            ]
            data["unclassified_candidates"] = sum(1 for _, cls in self.candidates if cls.unclassified)
            data["families_missing_from_solver"] = list(self.missing_from_solver)
        else:
            data["iv_passing"] = list(self.iv_passing)
        return data


class WittVirasoroService:
    """Builds catalog operators, evaluates the functional equation and adjudicates families."""

    def __init__(self, verifier: Optional[VerificationService] = None):
        self.verifier = verifier or VerificationService()
        self._solver: Optional["WittSolver"] = None

    @property
    def solver(self) -> "WittSolver":
        if self._solver is None:
            from services.solver import WittSolver
            self._solver = WittSolver(self)
        return self._solver

    # -- builders -----------------------------------------------------------

    @staticmethod
    def witt_coefficients(family: WittFamily) -> FamilySource:
        """Closed-form f in target coordinates: ``R(L_m) = f(m+k) L_{m+k}``."""
        k, p, tag = family.k, family.param, family.tag
        if tag is WittFamilyTag.I:
            formula = _indicator(-k, p)
        elif tag is WittFamilyTag.II:
            _require(k != 0, "family II needs a nonzero half-degree")
            _require(not p.is_zero, "family II needs beta != 0")
            half = k
            formula = lambda m: p if m == 0 else (p * 4 if m == -half else ZERO)
        elif tag in (WittFamilyTag.III_THM, WittFamilyTag.III_PROP4):
            l = family.l
            _require(l is not None and l != 0, "family III needs a nonzero l")
            _require(k % l != 0, f"family III needs l not dividing k (l={l}, k={k})")
            _require(not p.is_zero, "family III needs gamma != 0")
            if tag is WittFamilyTag.III_THM:
                # (k-2m)/(m+2k) on the source index m, moved to target m' = m + k.
                coefficient = lambda m: p * Fraction(3 * k - 2 * m, m + k)
            else:
                coefficient = lambda m: p * Fraction(k - 2 * m, m + k)
            formula = _on_lattice(abs(l), coefficient)
        elif tag is WittFamilyTag.DEG0:
            _require(k == 0, "Deg0 family has degree 0")
            formula = _indicator(0, p)
        elif tag is WittFamilyTag.SUPPORT_ORIGIN:
            formula = _indicator(0, p)
        elif tag is WittFamilyTag.SUPPORT_MINUS_K:
            _require(k != 0, "SupportMinusK needs a nonzero degree")
            formula = _indicator(-k, p)
        else:
            raise InvalidFamilyParams(f"unknown Witt family {tag}")
        return FamilySource(tag=tag.value, label=family.label, formula=formula)

    def build_witt_family(self, family: WittFamily) -> HomogeneousOperator:
        return HomogeneousOperator(AlgebraKind.WITT, family.degree, self.witt_coefficients(family))

    @staticmethod
    def iv_coefficient(k: int, tag: VirFamilyTag) -> Fraction:
        """Coefficient of ``mu`` in ``R(L_0)``; both signs of family IV."""
        value = Fraction(k * k - 1, 24)
        return value if tag is VirFamilyTag.IV_PRINTED else -value

    def build_vir_family(self, family: VirFamily) -> HomogeneousOperator:
        tag, k = family.tag, family.k
        theta, mu, nu = ZERO, ZERO, ZERO
        if tag is VirFamilyTag.DEG0:
            _require(k == 0, "Deg0 family has degree 0")
            formula = _indicator(0, family.alpha)
            theta, mu, nu = family.theta, family.mu, family.nu
        elif tag is VirFamilyTag.I:
            _require(k != 0, "family I needs a nonzero degree")
            formula = lambda m: ZERO
            theta = family.theta
        elif tag is VirFamilyTag.II:
            _require(k != 0, "family II needs a nonzero degree")
            _require(not family.alpha.is_zero, "family II needs alpha != 0")
            formula = _indicator(-k, family.alpha)
        elif tag is VirFamilyTag.III:
            _require(k != 0, "family III needs a nonzero half-degree")
            _require(not family.beta.is_zero, "family III needs beta != 0")
            beta = family.beta
            formula = lambda m: beta if m == 0 else (beta * 4 if m == -k else ZERO)
            theta = family.theta
        elif tag in (VirFamilyTag.IV_PRINTED, VirFamilyTag.IV_SIGNFLIP):
            _require(k != 0, "family IV needs a nonzero degree")
            _require(not family.mu.is_zero, "family IV needs mu != 0")
            formula = _indicator(k, family.mu * self.iv_coefficient(k, tag))
            mu = family.mu
        else:
            raise InvalidFamilyParams(f"unknown Virasoro family {tag}")
        source = FamilySource(tag=tag.value, label=family.label, formula=formula)
        return HomogeneousOperator(AlgebraKind.VIRASORO, family.degree, source, theta=theta, mu=mu, nu=nu)

    # -- functional equation ------------------------------------------------

    @staticmethod
    def functional_eq_residual(f: CoefficientSource, k: int, m: int, n: int) -> Optional[Scalar]:
        """``f(m)f(n)(n-m) - f(m+n)(f(m)(m-n+k) + f(n)(m-n-k))``; ``None`` if skipped."""
        fm, fn, fmn = f.lookup(m), f.lookup(n), f.lookup(m + n)
        if fm is None or fn is None or fmn is None:
            return None
        return fm * fn * (n - m) - fmn * (fm * (m - n + k) + fn * (m - n - k))

    def transport_cross_check(self, op: HomogeneousOperator, window: int) -> VerificationReport:
        """Compare the operator residual at ``(L_m, L_n)`` with ``-r * L_{m+n+2k}``.

        ``r`` is the functional-equation residual at ``m+k, n+k``. A violation
        records the difference of the two sides.
        """
        if op.algebra is not AlgebraKind.WITT:
            raise InvalidFamilyParams("transport cross-check is defined on the Witt algebra")
        k = op.degree
        report = VerificationReport(kind=IdentityKind.ANTI_RB, window=window)
        basis = [L(n) for n in range(-window, window + 1)]
        for x, y in combinations_with_replacement(basis, 2):
            operator_side = self.verifier.delta_rb_residual(op, x, y)
            scalar = self.functional_eq_residual(op.coeffs, k, x.n + k, y.n + k)
            if operator_side is None or scalar is None:
                report.skipped += 1
                continue
            report.checked += 1
            predicted = L(x.n + y.n + 2 * k)
            difference = operator_side + Element.basis(predicted, scalar)
            if not difference.is_zero:
                report.violations.append(Violation((x, y), difference))
        report.violations.sort(key=lambda v: v.inputs)
        return report

    def first_functional_counterexample(self, f: CoefficientSource, k: int,
                                        window: int) -> Optional[tuple[int, int, Scalar]]:
        """Smallest ``(m, n)`` with ``m <= n`` in the window and nonzero residual."""
        pairs = sorted(
            ((m, n) for m in range(-window, window + 1) for n in range(m, window + 1)),
            key=lambda p: (abs(p[0]) + abs(p[1]), p),
        )
        for m, n in pairs:
            r = self.functional_eq_residual(f, k, m, n)
            if r is not None and not r.is_zero:
                return m, n, r
        return None

    # -- catalogs -----------------------------------------------------------

    def witt_catalog(self, k: int, window: int) -> list[WittFamily]:
        """Catalog families of degree ``k`` at every sampled parameter."""
        families: list[WittFamily] = []
        for p in PARAM_SAMPLES:
            families.append(WittFamily(WittFamilyTag.I, k, p))
            if k == 0:
                families.append(WittFamily(WittFamilyTag.DEG0, 0, p))
            else:
                families.append(WittFamily(WittFamilyTag.SUPPORT_MINUS_K, k, p))
                if k % 2 == 0:
                    families.append(WittFamily(WittFamilyTag.II, k // 2, p))
                for l in self.lattice_steps(k, window):
                    families.append(WittFamily(WittFamilyTag.III_THM, k, p, l))
                    families.append(WittFamily(WittFamilyTag.III_PROP4, k, p, l))
            families.append(WittFamily(WittFamilyTag.SUPPORT_ORIGIN, k, p))
        return families

    @staticmethod
    def lattice_steps(k: int, window: int, limit: int = 2) -> list[int]:
        """The first ``limit`` values ``l >= 2`` with ``l`` not dividing ``k``, up to the window."""
        if k == 0:
            return []
        steps = [l for l in range(2, window + 1) if k % l != 0]
        return steps[:limit]

    @staticmethod
    def vir_catalog(k: int) -> list[VirFamily]:
        families: list[VirFamily] = []
        if k == 0:
            for alpha, theta, mu, nu in ((1, 2, 3, 4), (1, 1, 1, 1)):
                families.append(VirFamily(VirFamilyTag.DEG0, 0, alpha=Scalar(alpha), theta=Scalar(theta),
                                          mu=Scalar(mu), nu=Scalar(nu)))
            families.append(VirFamily(VirFamilyTag.DEG0, 0, alpha=ONE, theta=Scalar(1, 1),
                                      mu=Scalar(Fraction(1, 2)), nu=ONE))
            return families
        for p in PARAM_SAMPLES:
            families.append(VirFamily(VirFamilyTag.I, k, theta=p))
            families.append(VirFamily(VirFamilyTag.II, k, alpha=p))
            if k % 2 == 0:
                families.append(VirFamily(VirFamilyTag.III, k // 2, beta=p, theta=p * 2))
            families.append(VirFamily(VirFamilyTag.IV_PRINTED, k, mu=p))
            families.append(VirFamily(VirFamilyTag.IV_SIGNFLIP, k, mu=p))
        return families

    # -- adjudication -------------------------------------------------------

    @staticmethod
    def check_window(k: int, window: int):
        if window < 2 * abs(k) + 4:
            raise WindowTooSmall(f"window {window} < 2|k|+4 = {2 * abs(k) + 4}")

    @staticmethod
    def normalized_vector(source: CoefficientSource, window: int) -> Optional[tuple[Scalar, ...]]:
        """Values on ``[-window, window]`` scaled so the first nonzero of f(0), f(-k) becomes 1."""
        values = [source.lookup(m) for m in range(-window, window + 1)]
        if any(v is None for v in values):
            return None
        pivot = values[window]
        if pivot.is_zero:
            pivot = next((v for v in values if not v.is_zero), None)
            if pivot is None:
                return None
        return tuple(v / pivot for v in values)

    def adjudicate_witt(self, k: int, window: int) -> AdjudicationReport:
        """Verify every Witt family of degree ``k`` and classify the solver output."""
        self.check_window(k, window)
        report = AdjudicationReport(AlgebraKind.WITT, k, window)
        catalog = self.witt_catalog(k, window)
        for family in catalog:
            op = self.build_witt_family(family)
            result = self.verifier.verify_identity(op, window, IdentityKind.ANTI_RB)
            counterexample = None
            if not result.passed:
                counterexample = self.first_functional_counterexample(op.coeffs, k, window)
            agrees = self.transport_cross_check(op, window).passed
            report.verdicts.append(FamilyVerdict(family.label, family.tag.value, result, counterexample, agrees))

        solver_window = min(window, max(8, abs(k) + 2))
        stable: list[SolutionCandidate] = []
        for branch in (SolverBranch.F0_NONZERO, SolverBranch.F0_ZERO):
            for candidate in self.solver.stable_solutions(k, solver_window, branch):
                stable.append(candidate)
                report.candidates.append((candidate, self.solver.classify_solution(candidate)))

        # Every passing family, normalized and restricted, must show up among stable candidates.
        seen = {c.values for c in stable}
        for verdict, family in zip(report.verdicts, catalog):
            if not verdict.report.passed or family.param != ONE:
                continue
            vector = self.normalized_vector(self.build_witt_family(family).coeffs, solver_window)
            if vector is not None and vector not in seen:
                report.missing_from_solver.append(family.label)

        logger.info("Witt degree %d: %d families, %d failing, %d stable candidates",
                    k, len(report.verdicts), sum(not v.report.passed for v in report.verdicts),
                    len(report.candidates))
        return report

    def adjudicate_virasoro(self, k: int, window: int) -> AdjudicationReport:
        """Verify every Virasoro family of degree ``k``, central pairs included."""
        self.check_window(k, window)
        report = AdjudicationReport(AlgebraKind.VIRASORO, k, window)
        for family in self.vir_catalog(k):
            result = self.verifier.verify_identity(self.build_vir_family(family), window, IdentityKind.ANTI_RB)
            report.verdicts.append(FamilyVerdict(family.label, family.tag.value, result))
        for tag in (VirFamilyTag.IV_PRINTED, VirFamilyTag.IV_SIGNFLIP):
            verdicts = [v for v in report.verdicts if v.tag == tag.value]
            if verdicts and all(v.report.passed for v in verdicts):
                report.iv_passing.append(tag.value)
        if k != 0 and len(report.iv_passing) != 1 and k * k != 1:
            logger.warning("degree %d: %d variants of family IV pass", k, len(report.iv_passing))
        return report

    def adjudicate(self, k: int, window: int, algebra: AlgebraKind = AlgebraKind.WITT) -> AdjudicationReport:
        if algebra is AlgebraKind.WITT:
            return self.adjudicate_witt(k, window)
        if algebra is AlgebraKind.VIRASORO:
            return self.adjudicate_virasoro(k, window)
        raise InvalidFamilyParams("adjudication covers Witt and Virasoro only")
