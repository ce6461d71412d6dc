"""
Tests for the sl2 suite: pattern catalog, matching, grid search,
invertibility conditions and the anti-derivation bridge.
"""

from fractions import Fraction

import pytest

from models.errors import DivisionByZero, ExcludedLocus, InvalidFamilyParams, SingularMatrix
from models.families import STRONG_LISTED, Sl2Tag
from models.matrix import Matrix3
from models.operator import IdentityKind
from models.scalar import ONE, Scalar
from services.sl2 import STATED_INVERTIBILITY


class TestCatalog:
    @pytest.mark.smoke
    @pytest.mark.parametrize("tag", list(Sl2Tag))
    def test_samples_satisfy_relations_and_identities(self, sl2, tag):
        result = sl2.verify_family(tag, samples=8, seed=7)
        assert result.relations_pass == 8
        assert result.anti_rb_pass == 8
        assert result.strong_pass == 8

    def test_f8_point(self, sl2):
        matrix = sl2.build_sl2_family(Sl2Tag.F8, {"a": 1, "l": 2})
        assert matrix == Matrix3.of([[1, -1, 0], [1, -1, 0], [-2, 2, 0]])
        assert all(r.is_zero for r in sl2.relations_residuals(matrix))

    def test_f10_point(self, sl2, verifier):
        matrix = sl2.build_sl2_family(Sl2Tag.F10, {"a": 1, "g": 0, "c": 1})
        assert matrix == Matrix3.of([[1, 0, 1], [Fraction(1, 4), 0, Fraction(1, 4)], [-1, 0, -1]])
        assert verifier.verify_identity(matrix, 1).passed

    @pytest.mark.parametrize("tag, params, condition", [
        (Sl2Tag.F2, {"d": 1, "h": 0}, "h ≠ 0"),
        (Sl2Tag.F6, {"b": 0, "k": 1, "m": 1}, "b·k ≠ 0"),
        (Sl2Tag.F10, {"a": 2, "g": -2, "c": 1}, "a ≠ ±g"),
    ])
    def test_excluded_locus(self, sl2, tag, params, condition):
        with pytest.raises(ExcludedLocus) as error:
            sl2.build_sl2_family(tag, params)
        assert error.value.condition == condition

    def test_wrong_parameter_names(self, sl2):
        with pytest.raises(InvalidFamilyParams):
            sl2.build_sl2_family(Sl2Tag.F1, {"d": 1})
        with pytest.raises(InvalidFamilyParams):
            sl2.build_sl2_family(Sl2Tag.F1, {"d": 1, "m": 1, "x": 0})

    def test_sampling_is_seeded(self, sl2):
        first = [m for _, m in sl2.sample_family(Sl2Tag.F9, 5, seed=3)]
        second = [m for _, m in sl2.sample_family(Sl2Tag.F9, 5, seed=3)]
        assert first == second

    def test_strong_sublist_is_not_exhaustive(self, sl2):
        results = sl2.verify_all_families(samples=4, seed=11)
        unlisted = [r.tag for r in results if not r.strong_listed and r.strong_falsified == 0]
        assert {tag for tag in Sl2Tag if tag not in STRONG_LISTED} == set(unlisted)
        assert all(r.strong_falsified == 0 for r in results if r.strong_listed)

    @pytest.mark.slow
    def test_hundred_samples_per_family(self, sl2):
        results = sl2.verify_all_families(samples=100, seed=42)
        assert len(results) == 10
        for result in results:
            assert result.relations_pass == result.anti_rb_pass == 100
            if result.strong_listed:
                assert result.strong_pass == 100
            else:
                assert result.strong_falsified >= 1
                assert "first_failure" in result.to_dict()

    @pytest.mark.parametrize("tag", list(Sl2Tag))
    def test_symbolic_check(self, sl2, tag):
        result = sl2.symbolic_family_check(tag)
        assert result.relations_vanish
        assert result.strong_vanishes
        assert result.nonzero == []


class TestMatching:
    def test_f9_point(self, sl2):
        matrix = Matrix3.of([[1, 0, 0], [0, 1, 0], [0, 0, Fraction(-1, 2)]])
        match = sl2.match_family(matrix)
        assert Sl2Tag.F9 in match.tags
        assert not match.boundary

    def test_zero_matrix_is_f1(self, sl2):
        assert Sl2Tag.F1 in sl2.match_family(Matrix3.zero()).tags

    def test_identity_matches_nothing(self, sl2):
        match = sl2.match_family(Matrix3.identity())
        assert match.unmatched
        assert match.to_dict() == {"tags": [], "boundary": False, "unmatched": True}

    def test_strict_match_hides_boundary(self, sl2):
        # Also F3 at c = 0, but a strict match wins over boundary ones.
        matrix = Matrix3.of([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
        match = sl2.match_family(matrix)
        assert Sl2Tag.F4 in match.tags
        assert not match.boundary


class TestGrid:
    def test_range_one(self, sl2):
        result = sl2.grid_search(1)
        hits = [hit.matrix for hit in result.hits]
        assert Matrix3.zero() in hits
        assert Matrix3.of([[0, 0, 0], [1, 0, 0], [0, 0, 1]]) in hits
        assert Matrix3.identity() not in hits
        for hit in result.hits:
            assert all(r.is_zero for r in sl2.relations_residuals(hit.matrix))
            assert hit.match.unmatched == (hit in result.flagged)
        entries = [hit.matrix.entries() for hit in result.hits]
        assert entries == sorted(entries, key=lambda row: tuple(x.re for x in row))
        assert result.to_dict()["candidates"] == 3 ** 9

    @pytest.mark.slow
    def test_worker_count_does_not_change_output(self, sl2):
        serial = sl2.grid_search(1, workers=1).to_dict()
        parallel = sl2.grid_search(1, workers=2).to_dict()
        assert serial == parallel

    @pytest.mark.slow
    def test_range_two(self, sl2):
        result = sl2.grid_search(2, workers=4)
        data = result.to_dict()
        assert data["candidates"] == 5 ** 9
        for hit in result.hits:
            assert all(r.is_zero for r in sl2.relations_residuals(hit.matrix))
            assert hit.match.tags or hit in result.flagged
        assert data["unmatched"] == [hit.to_dict() for hit in result.flagged]
        assert sl2.grid_search(2, workers=1).to_dict() == data

    def test_range_must_be_positive(self, sl2):
        with pytest.raises(ValueError):
            sl2.grid_search(0)


class TestInvertibility:
    def test_f6_determinant(self, sl2):
        matrix = sl2.build_sl2_family(Sl2Tag.F6, {"b": 2, "k": 3, "m": 5})
        assert matrix.det() == -9

    def test_stated_f9_condition_has_singular_counterexample(self, sl2):
        params = {"a": ONE, "b": Scalar(0), "c": ONE, "d": Scalar(0), "h": Scalar(Fraction(1, 4))}
        matrix = sl2.build_sl2_family(Sl2Tag.F9, params)
        assert matrix.det() == 0
        _, stated = STATED_INVERTIBILITY[Sl2Tag.F9]
        assert stated(params) == -2

    def test_condition_verdicts(self, sl2):
        verdicts = {v.tag: v for v in sl2.check_invertibility_remark(samples=10, violating=5, seed=42)}
        assert verdicts[Sl2Tag.F6].consistent
        assert verdicts[Sl2Tag.F7].consistent
        assert not verdicts[Sl2Tag.F9].consistent
        assert verdicts[Sl2Tag.F9].counterexample is not None

    @pytest.mark.slow
    def test_fifty_samples_per_condition(self, sl2):
        verdicts = {v.tag: v for v in sl2.check_invertibility_remark(samples=50, violating=10, seed=42)}
        assert [v.satisfying for v in verdicts.values()] == [50, 50, 50]
        for tag in (Sl2Tag.F6, Sl2Tag.F7):
            assert verdicts[tag].satisfying_ok == 50
            assert verdicts[tag].violating_singular == verdicts[tag].violating == 10
            assert verdicts[tag].consistent
        assert not verdicts[Sl2Tag.F9].consistent


class TestBridge:
    def test_diagonal_anti_derivation(self, sl2):
        A = sl2.build_antiderivation(1, 0, 0, 0, 0)
        assert A.matrix() == Matrix3.of([[1, 0, 0], [0, 1, 0], [0, 0, -2]])
        assert sl2.antideriv_det(A) == -2
        assert sl2.antideriv_inverse_closed_form(A) == Matrix3.of([[1, 0, 0], [0, 1, 0], [0, 0, Fraction(-1, 2)]])
        report = sl2.bridge_check(A)
        assert report.passed
        assert report.closed_form_agrees is True

    def test_closed_form_skipped_when_a_prime_vanishes(self, sl2):
        A = sl2.build_antiderivation(1, 0, 1, 0, 1)
        assert sl2.antideriv_det(A) == 2
        with pytest.raises(DivisionByZero):
            sl2.antideriv_inverse_closed_form(A)
        report = sl2.bridge_check(A)
        assert report.closed_form_agrees is None
        assert report.is_derivation
        assert report.inverse_is_anti_rb

    def test_singular_anti_derivation(self, sl2):
        with pytest.raises(SingularMatrix):
            sl2.antideriv_inverse_closed_form(sl2.build_antiderivation(0, 0, 0, 0, 0))

    def test_seeded_samples(self, sl2):
        reports = sl2.bridge_samples(samples=15, seed=5)
        assert len(reports) == 15
        assert all(r.passed for r in reports)

    @pytest.mark.slow
    def test_hundred_seeded_samples(self, sl2):
        reports = sl2.bridge_samples(samples=100, seed=42)
        assert len(reports) == 100
        assert all(r.passed for r in reports)
        assert all(r.det_formula_agrees for r in reports)

    def test_anti_derivations_are_derivations_with_delta_minus_one(self, sl2, verifier):
        A = sl2.build_antiderivation(2, Fraction(1, 3), -1, 4, Scalar(0, 1)).matrix()
        assert verifier.verify_identity(A, 1, IdentityKind.DELTA_DERIVATION, -1).passed

    def test_delta_bridge(self, sl2):
        assert sl2.delta_bridge(Matrix3.identity(), Fraction(1, 2)) == (True, True)
        assert sl2.delta_bridge(Matrix3.identity(), 1) == (False, False)
