"""Windowed enumeration of solutions to the homogeneous functional equation.

With ``f(0) = 1`` the ``n = 0`` instance of the equation leaves each index
two choices: ``0`` or ``(k-2m)/(m+k)`` (``-2`` when ``k = 0``). The search
assigns indices in order of ``|m|`` and prunes as soon as a fully assigned
pair ``(m, n)`` has a nonzero residual. Results are window-consistent only;
stability is judged by re-checking on the doubled window.
"""

import logging
from fractions import Fraction
from itertools import product
from typing import Iterator, Optional

from models.errors import WindowTooSmall
from models.families import (
    Classification,
    Normalization,
    SolutionCandidate,
    SolverBranch,
    WittFamily,
    WittFamilyTag,
)
from models.operator import TableSource
from models.scalar import Scalar, ONE, ZERO
from services.witt_virasoro import WittVirasoroService

logger = logging.getLogger(__name__)

Vector = tuple[Scalar, ...]


def _search_order(window: int) -> list[int]:
    order = []
    for step in range(1, window + 1):
        order.extend((step, -step))
    return order


def _pair_ok(values: dict[int, Scalar], k: int, m: int, n: int) -> bool:
    fm, fn, fmn = values[m], values[n], values[m + n]
    return (fm * fn * (n - m) - fmn * (fm * (m - n + k) + fn * (m - n - k))).is_zero


def _consistent(values: dict[int, Scalar], k: int, window: int, newest: int) -> bool:
    """Check every fully assigned pair that involves ``newest``."""
    for other in list(values):
        for m, n in ((newest, other), (other, newest - other), (other, newest)):
            if m > n or m not in values or n not in values:
                continue
            if abs(m + n) > window or (m + n) not in values:
                continue
            if newest not in (m, n, m + n):
                continue
            if not _pair_ok(values, k, m, n):
                return False
    return True


def _to_vector(values: dict[int, Scalar], window: int) -> Vector:
    return tuple(values[m] for m in range(-window, window + 1))


def _vector_key(vector: Vector) -> tuple:
    return tuple((v.re, v.im) for v in vector)


class WittSolver:
    """Enumerates, stabilizes and classifies windowed solutions for one degree at a time."""

    def __init__(self, families: Optional[WittVirasoroService] = None):
        self.families = families or WittVirasoroService()

    @staticmethod
    def dichotomy_value(k: int, m: int) -> Scalar:
        """Nonzero choice at index ``m`` when ``f(0) = 1``."""
        if k == 0:
            return Scalar(-2)
        return Scalar(Fraction(k - 2 * m, m + k))

    def index_options(self, k: int, window: int) -> dict[int, tuple[Scalar, ...]]:
        """Allowed values per index; forced zeros at ``-k`` and ``k/2``."""
        options: dict[int, tuple[Scalar, ...]] = {0: (ONE,)}
        for m in range(-window, window + 1):
            if m == 0:
                continue
            if k != 0 and m == -k:
                options[m] = (ZERO,)
                continue
            value = self.dichotomy_value(k, m)
            options[m] = (ZERO,) if value.is_zero else (ZERO, value)
        return options

    @staticmethod
    def check_window_args(k: int, window: int):
        if window < 2:
            raise WindowTooSmall(f"solver window must be at least 2, got {window}")
        if abs(k) > window:
            raise WindowTooSmall(f"degree {k} lies outside window {window}")

    def search_assignments(self, k: int, window: int) -> list[Vector]:
        """Depth-first search over the dichotomy with pair pruning (branch ``f(0) = 1``)."""
        self.check_window_args(k, window)
        options = self.index_options(k, window)
        order = _search_order(window)
        found: list[Vector] = []
        values: dict[int, Scalar] = {0: ONE}

        def descend(depth: int):
            # Every index assigned
            if depth == len(order):
                found.append(_to_vector(values, window))
                return
            m = order[depth]
            for choice in options[m]:
                values[m] = choice
                # Prune on the first closed pair with a nonzero residual
                if _consistent(values, k, window, m):
                    descend(depth + 1)
                # Backtrack
                del values[m]

        descend(0)
        logger.debug("degree %d window %d: %d raw assignments", k, window, len(found))
        return sorted(set(found), key=_vector_key)

    def exhaustive_assignments(self, k: int, window: int) -> list[Vector]:
        """Brute force over every dichotomy assignment; the oracle for ``search_assignments``."""
        self.check_window_args(k, window)
        options = self.index_options(k, window)
        indices = list(range(-window, window + 1))
        found = set()
        for choice in product(*(options[m] for m in indices)):
            if self.all_pairs_vanish(choice, k, window):
                found.add(tuple(choice))
        return sorted(found, key=_vector_key)

    def all_pairs_vanish(self, vector: Vector, k: int, window: int) -> bool:
        """Zero residual for every ``m <= n`` with ``m, n, m+n`` in the window."""
        source = TableSource(-window, window, {m: vector[m + window] for m in range(-window, window + 1)})
        return self.first_failing_pair(source, k, window) is None

    def first_failing_pair(self, source: TableSource, k: int, window: int) -> Optional[tuple[int, int]]:
        for m in range(-window, window + 1):
            for n in range(m, window + 1):
                if abs(m + n) > window:
                    continue
                r = self.families.functional_eq_residual(source, k, m, n)
                if r is not None and not r.is_zero:
                    return m, n
        return None

    def extend_vector(self, candidate: SolutionCandidate, window: int) -> Vector:
        """Extend a candidate to ``[-window, window]`` by its natural pattern.

        Outside the original window the values follow the dichotomy on ``lZ``
        when the candidate's core support is exactly the in-window lattice
        ``lZ \\ {0}`` (``l`` its smallest core index); otherwise they are zero.
        """
        k, w = candidate.k, candidate.window
        core = [m for m in candidate.support() if m != 0 and not (k % 2 == 0 and k != 0 and m == -k // 2)]
        step = None
        if core and candidate.normalization is Normalization.F0_IS_1:
            step = min(abs(m) for m in core)
            lattice = [m for m in range(-w, w + 1)
                       if m != 0 and m % step == 0 and m != -k and not self.dichotomy_value(k, m).is_zero]
            if sorted(core) != lattice:
                step = None

        extended: list[Scalar] = []
        for m in range(-window, window + 1):
            if abs(m) <= w:
                extended.append(candidate.value(m))
            elif step is not None and m % step == 0 and m != -k:
                extended.append(self.dichotomy_value(k, m))
            else:
                extended.append(ZERO)
        return tuple(extended)

    def is_stable(self, candidate: SolutionCandidate) -> bool:
        """Survives the full pair check on the doubled window."""
        doubled = 2 * candidate.window
        return self.all_pairs_vanish(self.extend_vector(candidate, doubled), candidate.k, doubled)

    def enumerate_witt_solutions(self, k: int, window: int,
                                 branch: SolverBranch = SolverBranch.F0_NONZERO) -> list[SolutionCandidate]:
        """All window-consistent solutions of the branch, each with its stability flag."""
        self.check_window_args(k, window)
        if branch is SolverBranch.F0_ZERO:
            # n = 0 forces (m+k) f(m)^2 = 0, so only f(-k) survives.
            if k == 0:
                return []
            values = tuple(ONE if m == -k else ZERO for m in range(-window, window + 1))
            if not self.all_pairs_vanish(values, k, window):
                return []
            vectors = [values]
            normalization = Normalization.FMINUSK_IS_1
        else:
            vectors = self.search_assignments(k, window)
            normalization = Normalization.F0_IS_1

        candidates = []
        for vector in vectors:
            draft = SolutionCandidate(k, window, vector, normalization)
            candidates.append(SolutionCandidate(k, window, vector, normalization, self.is_stable(draft)))
        logger.info("degree %d window %d branch %s: %d candidates, %d stable",
                    k, window, branch.value, len(candidates), sum(c.stable for c in candidates))
        return candidates

    def stable_solutions(self, k: int, window: int,
                         branch: SolverBranch = SolverBranch.F0_NONZERO) -> list[SolutionCandidate]:
        return [c for c in self.enumerate_witt_solutions(k, window, branch) if c.stable]

    def _pattern(self, family: WittFamily, window: int) -> Optional[Vector]:
        return self.families.normalized_vector(self.families.witt_coefficients(family), window)

    def _candidate_patterns(self, k: int, window: int) -> Iterator[tuple[WittFamilyTag, Vector]]:
        if k == 0:
            yield WittFamilyTag.DEG0, self._pattern(WittFamily(WittFamilyTag.DEG0, 0), window)
            return
        if abs(k) <= window:
            minus_k = self._pattern(WittFamily(WittFamilyTag.I, k), window)
            yield WittFamilyTag.I, minus_k
            yield WittFamilyTag.SUPPORT_MINUS_K, minus_k
        yield WittFamilyTag.SUPPORT_ORIGIN, self._pattern(WittFamily(WittFamilyTag.SUPPORT_ORIGIN, k), window)
        if k % 2 == 0:
            yield WittFamilyTag.II, self._pattern(WittFamily(WittFamilyTag.II, k // 2), window)
        for l in range(2, window + 1):
            if k % l == 0:
                continue
            yield WittFamilyTag.III_THM, self._pattern(WittFamily(WittFamilyTag.III_THM, k, ONE, l), window)
            yield WittFamilyTag.III_PROP4, self._pattern(WittFamily(WittFamilyTag.III_PROP4, k, ONE, l), window)

    def classify_solution(self, candidate: SolutionCandidate) -> Classification:
        """Every catalog family whose normalized window pattern equals the candidate's values."""
        tags: list[WittFamilyTag] = []
        for tag, pattern in self._candidate_patterns(candidate.k, candidate.window):
            if pattern == candidate.values and tag not in tags:
                tags.append(tag)
        classification = Classification(tags)
        if classification.unclassified:
            logger.info("candidate %s matches no classified family", candidate.to_dict()["values"])
        return classification
