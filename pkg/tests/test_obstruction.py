"""
Tests for the Obstruction Engine

Success Criteria: SO+(3,19) is bijective up to degree 9; the Harer threshold
for degree 8 is genus 18; K3 with k = 1 is obstructed by l_2.
"""

from fractions import Fraction

import pytest

from obstruction_machine.core.config import IndependenceConfig, MachineConfig, set_config
from obstruction_machine.core.errors import (
    DegenerateForm,
    InvalidInput,
    NotARoot,
    OddArity,
    RankTooSmall,
    RegionTooLarge,
    ScaleExceeded,
)
from obstruction_machine.core.lattice import builtin_lattice, make_lattice
from obstruction_machine.obstruction.engine import (
    VERDICT_CANDIDATES,
    VERDICT_OBSTRUCTED,
    borel_stable_range,
    bott_obstruction,
    e2_region_check,
    first_obstruction_class,
    harer_genus_threshold,
    obstruction_report,
    stabilizer_report,
)
from obstruction_machine.obstruction.tensor import (
    connected_sum_pullback,
    ell_monomial,
    ell_product,
    independence_certificate,
    length,
    monomial_exponents,
)


def k3_root(i):
    v = [0] * 22
    v[i] = 1
    return v


@pytest.fixture
def k3():
    return builtin_lattice("K3")


class TestThresholds:
    """Test stable ranges, Bott vanishing and Harer thresholds."""

    def test_k3_stable_range(self):
        """Test (3,19): bijective up to 9, root type D_11."""
        sr = borel_stable_range(3, 19)
        assert sr.bijective_upto == 9
        assert sr.iso_upto_with_2q == 9
        assert sr.connectivity == 39
        assert sr.root_type == "D_11"

    def test_odd_rank_type(self):
        """Test odd p + q gives a B root system."""
        assert borel_stable_range(3, 18).root_type == "B_10"

    def test_small_rank(self):
        """Test p + q < 2 is refused."""
        with pytest.raises(RankTooSmall):
            borel_stable_range(1, 0)

    @pytest.mark.parametrize("i,k,expected", [(2, 1, True), (1, 1, False), (3, 2, True), (2, 2, False)])
    def test_bott(self, i, k, expected):
        """Test l_i vanishes on flat bundles exactly when i > k."""
        assert bott_obstruction(i, k) is expected

    def test_harer(self):
        """Test degree 8 needs genus 18."""
        assert harer_genus_threshold(8) == 18

    def test_first_obstruction(self):
        """Test k = 1 gives l_2 in degree 8."""
        first = first_obstruction_class(1)
        assert (first.i, first.degree, first.genus_threshold) == (2, 8, 18)


class TestObstructionReport:
    """Test obstruction reports."""

    def test_k3_with_summand(self, k3):
        """Test K3, k = 1 with a K3 summand is obstructed by l_2."""
        report = obstruction_report(k3, 1, k3_summand=True)
        assert report.verdict == VERDICT_OBSTRUCTED
        assert [c.i for c in report.candidates] == [2]
        assert report.candidates[0].bott_obstruction

    def test_range_alone_is_not_a_certificate(self, k3):
        """Test candidates without nonvanishing input stay uncertified."""
        report = obstruction_report(k3, 1)
        assert report.verdict == VERDICT_CANDIDATES
        assert not report.obstructed

    def test_surface_genus_certifies(self, k3):
        """Test a surface factor of genus >= 18 certifies for k = 1."""
        assert obstruction_report(k3, 1, surface_factors=[18, 2]).obstructed
        assert not obstruction_report(k3, 1, surface_factors=[17, 2]).obstructed

    def test_surface_factor_count(self, k3):
        """Test surface factors must number 2k."""
        with pytest.raises(OddArity):
            obstruction_report(k3, 1, surface_factors=[18])
        with pytest.raises(InvalidInput):
            obstruction_report(k3, 1, surface_factors=[18, 2, 2, 2])

    def test_k3_summand_only_in_dimension_four(self, k3):
        """Test a K3 summand does not certify for k = 2."""
        assert not obstruction_report(k3, 2, k3_summand=True).obstructed

    def test_degenerate(self):
        """Test degenerate forms are refused."""
        with pytest.raises(DegenerateForm):
            obstruction_report(make_lattice([[0]]), 1)


class TestStabilizers:
    """Test root-tuple stabilizers."""

    def test_single_root(self, k3):
        """Test one root: ambient SO+(3,18), odd vanishing up to 8."""
        report = stabilizer_report(k3, [k3_root(6)])
        assert report.ambient == (3, 18)
        assert report.ambient_label == "SO+(3,18)"
        assert report.odd_vanishing_upto == 8
        assert report.finite_quotient_bound == 1

    def test_pair(self, k3):
        """Test two roots in different -E8 blocks."""
        report = stabilizer_report(k3, [k3_root(6), k3_root(14)])
        assert report.ambient == (3, 17)
        assert report.finite_quotient_bound == 2
        assert report.odd_vanishing_upto == 8

    def test_not_a_root(self, k3):
        """Test vectors of norm other than -2 are refused."""
        with pytest.raises(NotARoot):
            stabilizer_report(k3, [k3_root(0)])

    def test_duplicates(self, k3):
        """Test a tuple must have distinct roots."""
        with pytest.raises(InvalidInput):
            stabilizer_report(k3, [k3_root(6), k3_root(6)])

    def test_region(self):
        """Test every tuple size up to 4 is fine in total degree 9."""
        region = e2_region_check(9)
        assert region.all_ok
        assert {r.n for r in region.rows} == {1, 2, 3, 4}

    def test_region_negative_degree(self):
        """Test a negative total degree is bad input."""
        with pytest.raises(InvalidInput):
            e2_region_check(-1)

    def test_region_limit(self):
        """Test the region is capped at total degree 9."""
        with pytest.raises(RegionTooLarge):
            e2_region_check(10)


class TestConnectedSums:
    """Test the tensor calculus for connected sums."""

    def test_single_class(self):
        """Test l_1 pulls back to a sum over slots."""
        t = connected_sum_pullback([1], 3)
        assert [length(s) for _, s in t.summands()] == [1, 1, 1]
        assert all(c == 1 for c, _ in t.summands())
        assert str(t).count(" ⊗ ") == 6

    def test_square_max_length_terms(self):
        """Test l_1^2 on two slots has 2 l_1 x l_1 at maximal length."""
        t = connected_sum_pullback([1, 1], 2)
        top = t.max_length_terms()
        assert t.max_length() == 2
        assert top == [(Fraction(2), ((("l_1", 1),), (("l_1", 1),)))]

    def test_ring_homomorphism(self):
        """Test pullback respects products."""
        x = ell_monomial([1, 0, 1])
        y = ell_monomial([0, 2])
        n = 3
        assert connected_sum_pullback(x * y, n) == connected_sum_pullback(x, n) * connected_sum_pullback(y, n)

    def test_index_list_matches_polynomial(self):
        """Test [1, 1, 2] reads as l_1^2 l_2."""
        assert ell_product([1, 1, 2]) == ell_monomial([2, 1])

    def test_permute_slots(self):
        """Test slot permutation is a symmetry of the pullback."""
        t = connected_sum_pullback([1, 2], 3)
        assert t.permute_slots([2, 3, 1]) == t

    def test_bad_permutation(self):
        """Test a non-permutation is refused."""
        with pytest.raises(InvalidInput):
            connected_sum_pullback([1], 2).permute_slots([1, 1])


class TestIndependence:
    """Test independence certificates."""

    def test_small_certificate(self):
        """Test monomials in l_1, l_2 of degree <= 3 are independent on 3 slots."""
        cert = independence_certificate(2, 3)
        assert cert.independent
        assert not cert.collisions
        assert len(cert.entries) == len(monomial_exponents(2, 3))

    def test_l2_and_l1_squared_differ(self):
        """Test l_2 and l_1^2 have different maximal terms."""
        cert = independence_certificate(2, 3, monomials=[[0, 1], [2, 0]])
        a, b = cert.entries
        assert a.signature != b.signature

    def test_duplicates_removed(self):
        """Test explicit monomials are deduplicated."""
        cert = independence_certificate(2, 2, monomials=[[1, 0], [1, 0]])
        assert len(cert.entries) == 1

    def test_scale_limit(self):
        """Test requests above the configured bounds are refused."""
        set_config(MachineConfig(independence=IndependenceConfig(max_classes=2, max_total=2)))
        try:
            with pytest.raises(ScaleExceeded):
                independence_certificate(3, 2)
        finally:
            set_config(None)

    def test_monomial_out_of_range(self):
        """Test exponents above N are refused."""
        with pytest.raises(InvalidInput):
            independence_certificate(2, 2, monomials=[[3, 0]])
