"""
Tests for Arrangement Homology

Success Criteria: one root gives the Betti numbers of S^2; m transversal
roots give sum_n C(m, n) t^n = (1 + t)^m inside the validity window.
"""

import json

import pytest
import sympy

from obstruction_machine.arrangement.engine import (
    betti_complement,
    betti_window,
    k3_arrangement_from_roots,
    load_arrangement,
    make_arrangement,
    poincare_polynomial,
    root_coordinates,
    single_subspace_betti,
    transversality_check,
)
from obstruction_machine.core.errors import (
    EvenAmbient,
    InvalidInput,
    NotARoot,
    ProportionalRoots,
    TransversalityFailure,
)
from obstruction_machine.core.lattice import builtin_lattice


def root(i):
    v = [0] * 22
    v[i] = 1
    return v


def unit(i, n):
    return [1 if j == i else 0 for j in range(n)]


class TestConstruction:
    """Test arrangement validation."""

    def test_root_arrangement_shape(self):
        """Test roots become codimension-3 subspaces of R^57."""
        a = k3_arrangement_from_roots([root(6), root(7)])
        assert a.ambient_dim == 57
        assert a.size == 2
        assert all(len(s) == 3 for s in a.subspaces)

    def test_root_coordinates(self):
        """Test c(d) pairs d with the t0-perp basis."""
        k3 = builtin_lattice("K3")
        c = root_coordinates(k3, root(6))
        assert len(c) == 19
        assert c[3] == -2

    def test_not_a_root(self):
        """Test a non-root is refused."""
        with pytest.raises(NotARoot):
            k3_arrangement_from_roots([root(0)])

    def test_proportional_roots(self):
        """Test d and -d are refused."""
        minus = [-x for x in root(6)]
        with pytest.raises(ProportionalRoots):
            k3_arrangement_from_roots([root(6), minus])

    def test_proportional_coordinates(self):
        """Test distinct roots with the same c(d) cut out one subspace and are refused."""
        d = root(0)
        d[6] = 1
        other = [0] * 22
        other[1], other[6] = -1, 1
        l = builtin_lattice("K3")
        assert l.norm(d) == l.norm(other) == -2
        assert root_coordinates(l, d) == root_coordinates(l, other)
        with pytest.raises(ProportionalRoots):
            k3_arrangement_from_roots([d, other])

    def test_coinciding_subspaces(self):
        """Test two equal subspaces are refused."""
        s = [unit(0, 5), unit(1, 5), unit(2, 5)]
        with pytest.raises(InvalidInput):
            make_arrangement(5, [s, s])

    def test_dependent_normals(self):
        """Test a subspace needs three independent normals."""
        with pytest.raises(InvalidInput):
            make_arrangement(5, [[unit(0, 5), unit(0, 5), unit(1, 5)]])

    def test_document(self):
        """Test an arrangement document with rational entries."""
        doc = {"ambient_dim": 5, "subspaces": [[unit(0, 5), unit(1, 5), ["1/2", 0, 1, 0, 0]]]}
        a = load_arrangement(json.dumps(doc))
        assert a.size == 1

    def test_bad_document(self):
        """Test a malformed document is bad input."""
        with pytest.raises(InvalidInput):
            load_arrangement('{"ambient_dim": 5}')


class TestTransversality:
    """Test transversality witnesses."""

    def test_root_arrangement_is_transversal(self):
        """Test standard roots give a transversal arrangement."""
        a = k3_arrangement_from_roots([root(i) for i in range(6, 10)])
        result = transversality_check(a)
        assert result.transversal
        assert result.subsets_checked == 15

    @pytest.mark.parametrize("dropped", range(4))
    def test_removing_a_subspace_stays_transversal(self, dropped):
        """Test every sub-arrangement of a transversal arrangement is transversal."""
        a = k3_arrangement_from_roots([root(i) for i in range(6, 10)])
        rest = [s for i, s in enumerate(a.subspaces) if i != dropped]
        smaller = make_arrangement(a.ambient_dim, rest)
        assert smaller.size == 3
        assert transversality_check(smaller).transversal

    def test_witness(self):
        """Test two subspaces sharing a normal direction fail at the pair."""
        a = make_arrangement(7, [[unit(0, 7), unit(1, 7), unit(2, 7)], [unit(0, 7), unit(3, 7), unit(4, 7)]])
        result = transversality_check(a)
        assert not result
        assert result.witness == (0, 1)
        assert result.witness_rank == 5
        assert result.expected_rank == 6


class TestBetti:
    """Test Betti numbers of complements."""

    def test_single_root_is_a_sphere(self):
        """Test one root matches S^2."""
        table = betti_complement(k3_arrangement_from_roots([root(6)]), 2)
        assert table.betti == single_subspace_betti(3).betti == {0: 1, 1: 0, 2: 1}

    def test_three_roots(self):
        """Test three roots: 1, 3, 3, 1 in degrees 0, 2, 4, 6."""
        table = betti_complement(k3_arrangement_from_roots([root(6), root(7), root(14)]), 6)
        assert [table.rank(d) for d in range(7)] == [1, 0, 3, 0, 3, 0, 1]
        assert table.lines()[:3] == ["0:1", "1:0", "2:3"]

    @pytest.mark.parametrize("m", [1, 2, 4, 5])
    def test_generating_function(self, m):
        """Test the Poincare polynomial is (1 + t)^m."""
        t = sympy.Symbol("t")
        table = betti_complement(k3_arrangement_from_roots([root(i) for i in range(6, 6 + m)]), 2 * m)
        expected = [int(c) for c in reversed(sympy.Poly((1 + t) ** m, t).all_coeffs())]
        assert poincare_polynomial(table) == expected

    def test_window(self):
        """Test the window for R^57."""
        assert betti_window(57) == 15

    def test_clamped(self):
        """Test degrees beyond the window are clamped."""
        a = make_arrangement(7, [[unit(0, 7), unit(1, 7), unit(2, 7)]])
        table = betti_complement(a, 10)
        assert table.clamped
        assert table.valid_upto == 2 * betti_window(7)

    def test_even_ambient(self):
        """Test even ambient dimensions are refused."""
        a = make_arrangement(6, [[unit(0, 6), unit(1, 6), unit(2, 6)]])
        with pytest.raises(EvenAmbient):
            betti_complement(a, 2)

    def test_non_transversal(self):
        """Test non-transversal arrangements are refused."""
        a = make_arrangement(7, [[unit(0, 7), unit(1, 7), unit(2, 7)], [unit(0, 7), unit(3, 7), unit(4, 7)]])
        with pytest.raises(TransversalityFailure):
            betti_complement(a, 4)
