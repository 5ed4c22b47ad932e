"""
Tests for the Genus Calculus

Success Criteria: x/tanh(x/2) = 2 + x^2/6 - x^4/360 + ...; ch_4^2 = 12 ch_8
in H*(BO3); fiber integration sends L~_1 to kappa_1/6 and L~_2 to
-kappa_3/360.
"""

from fractions import Fraction

import pytest
import sympy

from obstruction_machine.core.errors import InvalidInput, NotUnit, OddArity, UnsupportedRank
from obstruction_machine.genus.engine import (
    ch_component,
    chern_character_real,
    ell_from_ch,
    ell_product_of_surfaces,
    ell_relation_constant,
    fiber_integrate_surface,
    l_tilde_coefficient,
    l_tilde_rank2,
    series_inverse_check,
    substitute_kappa0,
    verify_bo3_relation,
    verify_degree12_relation,
)
from obstruction_machine.genus.graded import GradedPolynomial, generator_degree
from obstruction_machine.genus.series import FormalPowerSeries, cosh_series, l_tilde_series


def gen(name):
    return GradedPolynomial.generator(name)


class TestSeries:
    """Test formal power series."""

    def test_head_coefficients(self):
        """Test the first coefficients of x/tanh(x/2)."""
        s = l_tilde_series(6)
        assert s.coefficient(0) == 2
        assert s.coefficient(2) == Fraction(1, 6)
        assert s.coefficient(4) == Fraction(-1, 360)
        assert s.coefficient(6) == Fraction(1, 15120)

    def test_even(self):
        """Test odd coefficients vanish."""
        assert l_tilde_series(12).is_even()

    def test_against_sympy(self):
        """Test the series against sympy's expansion."""
        x = sympy.Symbol("x")
        expansion = sympy.series(x / sympy.tanh(x / 2), x, 0, 13).removeO()
        s = l_tilde_series(12)
        for k in range(13):
            expected = sympy.Rational(expansion.coeff(x, k))
            assert s.coefficient(k) == Fraction(int(expected.p), int(expected.q))

    @pytest.mark.parametrize("order", [4, 10, 20])
    def test_inverse_identity(self, order):
        """Test (x/tanh(x/2)) * tanh(x/2) = x."""
        assert series_inverse_check(order)

    def test_negative_order(self):
        """Test a negative series order is bad input."""
        with pytest.raises(InvalidInput):
            l_tilde_series(-1)
        with pytest.raises(InvalidInput):
            series_inverse_check(-1)

    def test_reciprocal_needs_unit(self):
        """Test 1/x is refused."""
        with pytest.raises(NotUnit):
            FormalPowerSeries.x(4).reciprocal()

    def test_reciprocal_of_cosh(self):
        """Test cosh * (1/cosh) = 1."""
        c = cosh_series(8)
        assert c * c.reciprocal() == FormalPowerSeries.constant(1, 8)

    def test_rank2_component(self):
        """Test the degree-8 part on a plane bundle is -e^4/360."""
        assert l_tilde_rank2(2) == gen("e") ** 4 * Fraction(-1, 360)
        assert l_tilde_coefficient(0) == 2


class TestGradedPolynomial:
    """Test graded polynomial bookkeeping."""

    def test_degrees(self):
        """Test generator degrees."""
        assert generator_degree("e") == 2
        assert generator_degree("p1") == 4
        assert generator_degree("kappa_3") == 6
        assert generator_degree("l_2") == 8
        assert generator_degree("kappa_1@2") == 2

    def test_component_and_homogeneity(self):
        """Test degree components."""
        p = gen("e") ** 2 + gen("p1") * 3 + 1
        assert p.degrees_present() == [0, 4]
        assert not p.is_homogeneous()
        assert p.component(4) == gen("e") ** 2 + gen("p1") * 3

    def test_rendering_is_exact(self):
        """Test rationals render as a/b."""
        p = gen("kappa_1") * Fraction(1, 6)
        assert str(p) == "1/6*kappa_1"


class TestFiberIntegration:
    """Test integration along surface fibers."""

    def test_l_tilde_one(self):
        """Test L~_1 integrates to kappa_1/6."""
        assert fiber_integrate_surface(l_tilde_rank2(1)) == gen("kappa_1") * Fraction(1, 6)

    def test_l_tilde_two(self):
        """Test L~_2 integrates to -kappa_3/360."""
        assert fiber_integrate_surface(l_tilde_rank2(2)) == gen("kappa_3") * Fraction(-1, 360)

    def test_constants_vanish(self):
        """Test L~_0 integrates to zero."""
        assert fiber_integrate_surface(l_tilde_rank2(0)).is_zero()

    def test_euler_class_gives_kappa0(self):
        """Test e integrates to kappa_0, and kappa_0 = 2 - 2g on substitution."""
        integrated = fiber_integrate_surface(gen("e") * 3)
        assert integrated == gen("kappa_0") * 3
        assert substitute_kappa0(integrated, 2) == GradedPolynomial.constant(-6)

    def test_slot_indexed_substitution(self):
        """Test slot-indexed kappa_0 takes the genus of its slot."""
        p = gen("kappa_0@1") * gen("kappa_0@2")
        assert substitute_kappa0(p, [0, 3]) == GradedPolynomial.constant(-8)

    def test_missing_slot_genus(self):
        """Test a slot without a genus is refused."""
        with pytest.raises(InvalidInput):
            substitute_kappa0(gen("kappa_0@3"), [1, 1])

    def test_rejects_other_generators(self):
        """Test only polynomials in e are integrated."""
        with pytest.raises(InvalidInput):
            fiber_integrate_surface(gen("p1"))


class TestChernCharacter:
    """Test the real Chern character and the l classes."""

    def test_rank3_components(self):
        """Test ch_4 = p1, ch_8 = p1^2/12, ch_12 = p1^3/360."""
        p1 = gen("p1")
        assert ch_component(0) == GradedPolynomial.constant(3)
        assert ch_component(4) == p1
        assert ch_component(8) == p1 ** 2 * Fraction(1, 12)
        assert ch_component(12) == p1 ** 3 * Fraction(1, 360)

    def test_low_ranks(self):
        """Test ranks 1 and 2."""
        assert chern_character_real(1, 12) == GradedPolynomial.constant(1)
        assert ch_component(4, rank=2) == gen("p1")
        assert ch_component(0, rank=2) == GradedPolynomial.constant(2)

    def test_unsupported_rank(self):
        """Test rank 4 is refused."""
        with pytest.raises(UnsupportedRank):
            chern_character_real(4, 8)

    @pytest.mark.parametrize("max_degree", [9, -2])
    def test_rejects_odd_or_negative_degree(self, max_degree):
        """Test the truncation degree must be even and non-negative."""
        with pytest.raises(InvalidInput):
            chern_character_real(3, max_degree)

    def test_bo3_relation(self):
        """Test ch_4^2 = 12 ch_8."""
        assert verify_bo3_relation().equal

    def test_degree12_ratio(self):
        """Test ch_4 ch_8 = 30 ch_12 is reported as a ratio."""
        check = verify_degree12_relation()
        assert not check.equal
        assert check.ratio == 30

    def test_ell_classes(self):
        """Test l_1 = 2 p1 and l_2 = p1^2/6."""
        assert ell_from_ch(1) == gen("p1") * 2
        assert ell_from_ch(2) == gen("p1") ** 2 * Fraction(1, 6)

    def test_ell_constant_discrepancy(self):
        """Test l_1^2 = 24 l_2 and the mismatch with 12 is flagged."""
        c = ell_relation_constant()
        assert c.computed == 24
        assert c.published == 12
        assert c.discrepancy

    def test_ell_index(self):
        """Test i must be positive."""
        with pytest.raises(InvalidInput):
            ell_from_ch(0)


class TestSurfaceProducts:
    """Test l_i for products of surface bundles."""

    def test_two_factors(self):
        """Test l_1 over a product of two surfaces."""
        expansion = ell_product_of_surfaces([18, 2], 1)
        assert expansion.k == 1
        assert expansion.term((1, 1)) == Fraction(1, 36)
        assert expansion.term((2, 0)) == Fraction(-1, 180)
        assert expansion.term((0, 2)) == Fraction(-1, 180)
        assert expansion.kappa_form == gen("kappa_1@1") * gen("kappa_1@2") * Fraction(1, 36)
        assert expansion.stable_upto == 8

    def test_degrees(self):
        """Test Euler form has degree 4(i+k) and kappa form degree 4i."""
        expansion = ell_product_of_surfaces([3, 3, 3, 3], 2)
        assert expansion.euler_form.degrees_present() == [16]
        assert expansion.kappa_form.degrees_present() == [8]

    def test_kappa_form_drops_empty_slots(self):
        """Test patterns with an L~_0 slot do not reach the kappa form."""
        expansion = ell_product_of_surfaces([5, 5], 1)
        assert all(len(m) == 2 for m, _ in expansion.kappa_form.terms())

    def test_odd_arity(self):
        """Test an odd number of surface factors is refused."""
        with pytest.raises(OddArity):
            ell_product_of_surfaces([2, 2, 2], 1)

    def test_empty(self):
        """Test an empty product is refused."""
        with pytest.raises(InvalidInput):
            ell_product_of_surfaces([], 1)
