"""
Tests for the windowed functional-equation solver.

The depth-first search is checked against brute force over the same
dichotomy, and the stable solution sets on small windows are pinned.
"""

from fractions import Fraction

import pytest

from models.errors import WindowTooSmall
from models.families import Normalization, SolutionCandidate, SolverBranch, WittFamilyTag
from models.scalar import ONE, ZERO, Scalar


def candidate(k, window, values, normalization=Normalization.F0_IS_1):
    vector = tuple(Scalar.of(values.get(m, 0)) for m in range(-window, window + 1))
    return SolutionCandidate(k, window, vector, normalization)


class TestDichotomy:
    def test_values(self, solver):
        assert solver.dichotomy_value(0, 3) == -2
        assert solver.dichotomy_value(1, 2) == -1
        assert solver.dichotomy_value(3, 1) == Fraction(1, 4)

    def test_forced_zeros(self, solver):
        options = solver.index_options(2, 4)
        assert options[0] == (ONE,)
        assert options[-2] == (ZERO,)
        assert options[1] == (ZERO,)
        assert options[2] == (ZERO, Scalar(Fraction(-1, 2)))

    def test_degree_zero_has_no_forced_zero(self, solver):
        options = solver.index_options(0, 3)
        assert all(options[m] == (ZERO, Scalar(-2)) for m in (-3, -1, 1, 3))


class TestSearch:
    @pytest.mark.parametrize("k", [-2, -1, 0, 1, 2, 3])
    def test_search_matches_brute_force(self, solver, k):
        assert solver.search_assignments(k, 4) == solver.exhaustive_assignments(k, 4)

    @pytest.mark.slow
    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    def test_search_matches_brute_force_at_window_six(self, solver, k):
        assert solver.search_assignments(k, 6) == solver.exhaustive_assignments(k, 6)

    @pytest.mark.parametrize("window", [4, 5, 6])
    def test_degree_zero_supports_are_symmetric(self, solver, window):
        candidates = solver.enumerate_witt_solutions(0, window)
        assert candidates
        for c in candidates:
            support = set(c.support())
            assert support == {-m for m in support}

    def test_every_assignment_solves_window(self, solver):
        for vector in solver.search_assignments(2, 5):
            assert solver.all_pairs_vanish(vector, 2, 5)

    @pytest.mark.parametrize("k, window", [(0, 1), (7, 6), (-7, 6)])
    def test_window_checks(self, solver, k, window):
        with pytest.raises(WindowTooSmall):
            solver.enumerate_witt_solutions(k, window)


class TestStableSolutions:
    @pytest.mark.parametrize("k, expected", [
        (0, [{0: 1}]),
        (1, [{0: 1}]),
        (2, [{0: 1}, {0: 1, -1: 4}]),
        (3, [{0: 1}]),
    ])
    def test_window_six(self, solver, k, expected):
        maps = [c.as_map() for c in solver.stable_solutions(k, 6)]
        assert len(maps) == len(expected)
        for values in expected:
            assert values in maps

    def test_candidates_are_flagged_not_dropped(self, solver):
        candidates = solver.enumerate_witt_solutions(1, 6)
        assert len(candidates) >= len(solver.stable_solutions(1, 6))
        assert all(c.normalization is Normalization.F0_IS_1 for c in candidates)

    def test_f0_zero_branch(self, solver):
        (only,) = solver.enumerate_witt_solutions(2, 6, SolverBranch.F0_ZERO)
        assert only.as_map() == {-2: 1}
        assert only.normalization is Normalization.FMINUSK_IS_1
        assert only.stable

    def test_f0_zero_branch_empty_at_degree_zero(self, solver):
        assert solver.enumerate_witt_solutions(0, 6, SolverBranch.F0_ZERO) == []


class TestExtension:
    def test_lattice_core_extends_on_lattice(self, solver):
        values = {0: 1, 2: -1, 4: Fraction(-7, 5), -2: -5, -4: -3}
        lattice = candidate(1, 4, values)
        extended = solver.extend_vector(lattice, 8)
        assert extended[6 + 8] == Fraction(-11, 7)
        assert extended[-6 + 8] == Fraction(-13, 5)
        assert extended[5 + 8] == 0
        assert not solver.is_stable(lattice)

    def test_other_cores_extend_by_zero(self, solver):
        extended = solver.extend_vector(candidate(2, 3, {0: 1, -1: 4}), 6)
        assert [m - 6 for m, v in enumerate(extended) if not v.is_zero] == [-1, 0]
        assert solver.is_stable(candidate(2, 3, {0: 1, -1: 4}))


class TestClassification:
    def test_degree_zero(self, solver):
        (solution,) = solver.stable_solutions(0, 6)
        assert solver.classify_solution(solution).tags == [WittFamilyTag.DEG0]

    def test_family_II_pattern(self, solver):
        solution = next(c for c in solver.stable_solutions(2, 6) if c.as_map() == {0: 1, -1: 4})
        result = solver.classify_solution(solution)
        assert result.tags == [WittFamilyTag.II]
        assert not result.unclassified

    def test_origin_support_is_unclassified(self, solver):
        result = solver.classify_solution(candidate(3, 6, {0: 1}))
        assert result.tags == [WittFamilyTag.SUPPORT_ORIGIN]
        assert result.unclassified
        assert result.to_dict() == {"tags": ["SupportOrigin"], "unclassified": True}

    def test_minus_k_support(self, solver):
        (solution,) = solver.enumerate_witt_solutions(3, 6, SolverBranch.F0_ZERO)
        assert solver.classify_solution(solution).tags == [WittFamilyTag.I, WittFamilyTag.SUPPORT_MINUS_K]


class TestCandidate:
    def test_serialization(self):
        solution = candidate(2, 3, {0: 1, -1: 4})
        assert solution.to_dict() == {
            "k": 2,
            "window": 3,
            "normalization": "f0_is_1",
            "stable": False,
            "values": {"-1": "4", "0": "1"},
        }

    def test_value_outside_window(self):
        with pytest.raises(IndexError):
            candidate(0, 2, {0: 1}).value(3)

    def test_values_must_cover_window(self):
        with pytest.raises(ValueError):
            SolutionCandidate(0, 2, (ONE,), Normalization.F0_IS_1)
