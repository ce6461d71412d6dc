"""
Tests for the Witt and Virasoro family catalog, the functional equation
and the adjudication runs.

Expected values come from direct substitution into the functional
equation, written out in the test bodies.
"""

from fractions import Fraction
from itertools import product

import pytest

from models.algebra import AlgebraKind, Element, L, central_index
from models.errors import InvalidFamilyParams, WindowTooSmall
from models.families import VirFamily, VirFamilyTag, WittFamily, WittFamilyTag
from models.operator import HomogeneousOperator, TableSource
from models.scalar import ONE, Scalar
from services.sl2 import RationalSampler

VIR = AlgebraKind.VIRASORO
PARAMS = [ONE, Scalar(Fraction(2, 3)), Scalar(1, 1)]


def random_table(seed: int, lo: int = -8, hi: int = 8) -> TableSource:
    """Seeded coefficient table with roughly a third of its entries zero."""
    sampler = RationalSampler(seed, bound=5)
    values = {}
    for m in range(lo, hi + 1):
        value = sampler.draw()
        values[m] = value if sampler.rng.random() > 1 / 3 else Scalar(0)
    return TableSource(lo, hi, values)


class TestWittFamilies:
    @pytest.mark.smoke
    @pytest.mark.parametrize("k", [1, 2, -3])
    @pytest.mark.parametrize("alpha", PARAMS)
    def test_family_I_passes(self, verifier, families, k, alpha):
        op = families.build_witt_family(WittFamily(WittFamilyTag.I, k, alpha))
        assert verifier.verify_identity(op, 8).passed

    @pytest.mark.slow
    @pytest.mark.parametrize("k", [-3, -2, -1, 0, 1, 2, 3])
    @pytest.mark.parametrize("alpha", PARAMS)
    def test_family_I_on_wide_window(self, verifier, families, k, alpha):
        op = families.build_witt_family(WittFamily(WittFamilyTag.I, k, alpha))
        report = verifier.verify_identity(op, 20)
        assert report.passed
        assert report.skipped == 0
        assert report.checked == 41 * 42 // 2

    def test_family_II_passes(self, verifier, families):
        op = families.build_witt_family(WittFamily(WittFamilyTag.II, 1, Scalar(3)))
        assert op.degree == 2
        assert op.coeffs.lookup(0) == 3
        assert op.coeffs.lookup(-1) == 12
        assert verifier.verify_identity(op, 8).passed

    @pytest.mark.slow
    @pytest.mark.parametrize("half", [-2, -1, 1, 2])
    @pytest.mark.parametrize("beta", [ONE, Scalar(Fraction(-5, 7))])
    def test_family_II_on_wide_window(self, verifier, families, half, beta):
        op = families.build_witt_family(WittFamily(WittFamilyTag.II, half, beta))
        report = verifier.verify_identity(op, 20)
        assert report.passed
        assert report.skipped == 0

    def test_degree_zero_family_passes(self, verifier, families):
        op = families.build_witt_family(WittFamily(WittFamilyTag.DEG0, 0, Scalar(5)))
        assert verifier.verify_identity(op, 6).passed

    @pytest.mark.parametrize("tag", [WittFamilyTag.SUPPORT_ORIGIN, WittFamilyTag.SUPPORT_MINUS_K])
    def test_single_support_families_pass(self, verifier, families, tag):
        op = families.build_witt_family(WittFamily(tag, 2, Scalar(0, 1)))
        assert verifier.verify_identity(op, 8).passed

    @pytest.mark.parametrize("family", [
        WittFamily(WittFamilyTag.II, 0),
        WittFamily(WittFamilyTag.III_PROP4, 2, ONE, 1),
        WittFamily(WittFamilyTag.III_THM, 1, ONE, None),
        WittFamily(WittFamilyTag.III_THM, 1, Scalar(0), 2),
        WittFamily(WittFamilyTag.DEG0, 1),
        WittFamily(WittFamilyTag.SUPPORT_MINUS_K, 0),
    ])
    def test_invalid_parameters(self, families, family):
        with pytest.raises(InvalidFamilyParams):
            families.witt_coefficients(family)


class TestFamilyIII:
    """k = 1, l = 2, gamma = 1: both versions of the lattice family fail."""

    def test_prop4_values(self, families):
        f = families.witt_coefficients(WittFamily(WittFamilyTag.III_PROP4, 1, ONE, 2))
        assert f.lookup(0) == 1
        assert f.lookup(2) == -1
        assert f.lookup(4) == Fraction(-7, 5)
        assert f.lookup(6) == Fraction(-11, 7)
        assert f.lookup(3) == 0

    def test_prop4_functional_residual(self, families):
        # f(2)f(4)(4-2) = 14/5 and f(6)(f(2)(2-4+1) + f(4)(2-4-1)) = -286/35.
        f = families.witt_coefficients(WittFamily(WittFamilyTag.III_PROP4, 1, ONE, 2))
        assert families.functional_eq_residual(f, 1, 2, 4) == Fraction(384, 35)

    def test_prop4_operator_residual_at_L1_L3(self, verifier, families):
        op = families.build_witt_family(WittFamily(WittFamilyTag.III_PROP4, 1, ONE, 2))
        assert verifier.delta_rb_residual(op, L(1), L(3)) == Element.basis(L(6), Fraction(-384, 35))

    @pytest.mark.parametrize("tag", [WittFamilyTag.III_PROP4, WittFamilyTag.III_THM])
    def test_both_versions_fail(self, verifier, families, tag):
        op = families.build_witt_family(WittFamily(tag, 1, ONE, 2))
        report = verifier.verify_identity(op, 8)
        assert not report.passed
        assert families.first_functional_counterexample(op.coeffs, 1, 8) is not None

    def test_prop4_violation_listed(self, verifier, families):
        op = families.build_witt_family(WittFamily(WittFamilyTag.III_PROP4, 1, ONE, 2))
        violations = {v.inputs: v.residual for v in verifier.verify_identity(op, 8).violations}
        assert violations[(L(1), L(3))] == Element.basis(L(6), Fraction(-384, 35))

    def test_thm_breaks_the_origin_dichotomy(self, families):
        # f(0) = 3, f(2) = -1/3: the n = 0 instance at m = 2 is nonzero.
        f = families.witt_coefficients(WittFamily(WittFamilyTag.III_THM, 1, ONE, 2))
        assert f.lookup(0) == 3
        assert f.lookup(2) == Fraction(-1, 3)
        assert families.functional_eq_residual(f, 1, 2, 0) != 0


class TestTransport:
    @pytest.mark.parametrize("family", [
        WittFamily(WittFamilyTag.III_PROP4, 1, ONE, 2),
        WittFamily(WittFamilyTag.III_THM, 2, Scalar(1, 1), 3),
        WittFamily(WittFamilyTag.I, -2, ONE),
    ])
    def test_operator_residual_matches_functional_equation(self, families, family):
        report = families.transport_cross_check(families.build_witt_family(family), 6)
        assert report.passed
        assert report.checked == 91

    @pytest.mark.parametrize("seed", range(50))
    def test_random_tables_agree(self, families, seed):
        k = (0, 1, -1, 2, -2)[seed % 5]
        op = HomogeneousOperator(AlgebraKind.WITT, k, random_table(seed))
        report = families.transport_cross_check(op, 8)
        assert report.checked > 0
        assert report.passed, report.violations[:1]

    def test_functional_residual_skips_outside_domain(self, families):
        f = TableSource(-2, 2, {0: ONE})
        assert families.functional_eq_residual(f, 0, 2, 1) is None
        assert families.functional_eq_residual(f, 0, 1, 1) == 0


class TestVirasoroFamilies:
    @pytest.mark.parametrize("k", [1, -1, 2, -2])
    @pytest.mark.parametrize("tag", [VirFamilyTag.I, VirFamilyTag.II])
    def test_families_I_II_pass(self, verifier, families, k, tag):
        family = VirFamily(tag, k, alpha=Scalar(2), theta=Scalar(1, 1))
        assert verifier.verify_identity(families.build_vir_family(family), 16).passed

    @pytest.mark.parametrize("half", [1, -1])
    def test_family_III_passes(self, verifier, families, half):
        family = VirFamily(VirFamilyTag.III, half, beta=Scalar(Fraction(2, 3)), theta=Scalar(5))
        op = families.build_vir_family(family)
        assert op.degree == 2 * half
        assert verifier.verify_identity(op, 16).passed

    @pytest.mark.parametrize("alpha, theta, mu, nu", list(product([ONE, Scalar(Fraction(1, 2))], repeat=4)))
    def test_degree_zero_grid_passes(self, verifier, families, alpha, theta, mu, nu):
        family = VirFamily(VirFamilyTag.DEG0, 0, alpha=alpha, theta=theta, mu=mu, nu=nu)
        op = families.build_vir_family(family)
        assert op.image(central_index()).coefficient(central_index()) == nu
        report = verifier.verify_identity(op, 12)
        assert report.passed
        assert report.checked == 26 * 27 // 2

    def test_degree_zero_with_complex_theta(self, verifier, families):
        family = VirFamily(VirFamilyTag.DEG0, 0, alpha=ONE, theta=Scalar(1, 1), mu=Scalar(2), nu=Scalar(Fraction(1, 2)))
        assert verifier.verify_identity(families.build_vir_family(family), 12).passed

    @pytest.mark.parametrize("k", [2, 3, -2])
    def test_only_sign_flipped_family_IV_passes(self, verifier, families, k):
        as_stated = families.build_vir_family(VirFamily(VirFamilyTag.IV_PRINTED, k, mu=ONE))
        flipped = families.build_vir_family(VirFamily(VirFamilyTag.IV_SIGNFLIP, k, mu=ONE))
        assert not verifier.verify_identity(as_stated, 8).passed
        assert verifier.verify_identity(flipped, 16).passed

    def test_family_IV_coincides_at_degree_one(self, verifier, families):
        assert families.iv_coefficient(1, VirFamilyTag.IV_PRINTED) == families.iv_coefficient(1, VirFamilyTag.IV_SIGNFLIP) == 0
        op = families.build_vir_family(VirFamily(VirFamilyTag.IV_PRINTED, 1, mu=Scalar(3)))
        assert verifier.verify_identity(op, 8).passed

    def test_family_IV_needs_mu(self, families):
        with pytest.raises(InvalidFamilyParams):
            families.build_vir_family(VirFamily(VirFamilyTag.IV_SIGNFLIP, 2))


class TestAdjudication:
    def test_witt_degree_one(self, families):
        report = families.adjudicate(1, 8, AlgebraKind.WITT)
        assert len(report.passing("I")) == 3
        assert report.failing("III_prop4")
        assert report.failing("III_thm")
        assert not report.failing("I")
        assert all(v.transport_agrees for v in report.verdicts)
        assert report.missing_from_solver == []
        data = report.to_dict()
        assert data["algebra"] == "witt"
        assert any(f["tag"] == "III_prop4" and "functional_counterexample" in f for f in data["families"])

    def test_witt_degree_one_solver_output(self, families):
        report = families.adjudicate(1, 8, AlgebraKind.WITT)
        tags = {tuple(sorted(c.as_map())): cls for c, cls in report.candidates}
        assert tags[(0,)].tags == [WittFamilyTag.SUPPORT_ORIGIN]
        assert tags[(0,)].unclassified
        assert tags[(-1,)].tags == [WittFamilyTag.I, WittFamilyTag.SUPPORT_MINUS_K]
        assert not tags[(-1,)].unclassified

    def test_virasoro_degree_two(self, families):
        report = families.adjudicate(2, 8, VIR)
        assert report.iv_passing == ["IV_signflip"]
        assert not report.failing("I")
        assert not report.failing("II")
        assert not report.failing("III")
        assert report.to_dict()["iv_passing"] == ["IV_signflip"]

    def test_window_must_cover_degree(self, families):
        with pytest.raises(WindowTooSmall):
            families.adjudicate(3, 9, AlgebraKind.WITT)

    def test_sl2_not_adjudicated_here(self, families):
        with pytest.raises(InvalidFamilyParams):
            families.adjudicate(0, 8, AlgebraKind.SL2)

    def test_lattice_steps_skip_divisors(self, families):
        assert families.lattice_steps(4, 8) == [3, 5]
        assert families.lattice_steps(1, 8) == [2, 3]
        assert families.lattice_steps(0, 8) == []
