"""
Tests for the Lattice Core

Success Criteria: K3 has rank 22, signature (3,19), even and unimodular;
E8 has exactly 240 vectors of norm 2.
"""

import json
import random

import pytest
import sympy

from obstruction_machine.core.errors import (
    BoxRequired,
    EmptyInput,
    InvalidInput,
    NonSymmetric,
    UnknownLattice,
)
from obstruction_machine.core.integer import determinant, hermite_rows, integer_kernel, mat_mul, rational_rank, transpose
from obstruction_machine.core.lattice import (
    Signature,
    builtin_lattice,
    diagonalize,
    direct_sum,
    enumerate_vectors,
    load_lattice,
    make_lattice,
    resolve_lattice,
    signature,
    slab_ranges,
    sublattice_report,
    vector_norm,
)


@pytest.fixture
def k3():
    return builtin_lattice("K3")


@pytest.fixture
def e8():
    return builtin_lattice("E8")


class TestConstruction:
    """Test Gram validation and built-in forms."""

    def test_rejects_non_symmetric(self):
        """Test that an asymmetric Gram matrix is refused."""
        with pytest.raises(NonSymmetric):
            make_lattice([[1, 2], [0, 1]])

    def test_rejects_non_square(self):
        """Test that a ragged Gram matrix is refused."""
        with pytest.raises(NonSymmetric):
            make_lattice([[1, 0], [0]])

    def test_rejects_empty(self):
        """Test that an empty Gram matrix is refused."""
        with pytest.raises(EmptyInput):
            make_lattice([])

    def test_rejects_non_integer_entries(self):
        """Test that fractional entries are refused."""
        with pytest.raises(InvalidInput):
            make_lattice([[0.5]])

    @pytest.mark.parametrize("gram", [[["a"]], [[[1]]], [1], [["1"]]])
    def test_rejects_malformed_entries(self, gram):
        """Test non-numeric or nested Gram entries are bad input, not a crash."""
        with pytest.raises(InvalidInput):
            make_lattice(gram)

    def test_unknown_builtin(self):
        """Test that an unknown name raises UnknownLattice."""
        with pytest.raises(UnknownLattice):
            builtin_lattice("E7")

    def test_hyperbolic_plane(self):
        """Test H invariants."""
        h = builtin_lattice("H")
        assert h.rank == 2
        assert h.determinant == -1
        assert h.is_even
        assert h.signature == Signature(1, 1, 0)

    def test_e8_invariants(self, e8):
        """Test E8 is even, unimodular and positive definite."""
        assert e8.rank == 8
        assert e8.determinant == 1
        assert e8.is_even
        assert e8.signature.as_tuple() == (8, 0)

    def test_k3_invariants(self, k3):
        """Test K3 = 3H + 2(-E8)."""
        assert k3.rank == 22
        assert k3.is_even
        assert k3.is_unimodular
        assert k3.signature.as_tuple() == (3, 19)
        assert str(k3.signature) == "(3,19)"
        assert not k3.signature.is_degenerate

    def test_direct_sum_signature_adds(self):
        """Test that signatures add under direct sum."""
        l = direct_sum(builtin_lattice("(1)"), builtin_lattice("(-1)"))
        assert l.signature.as_tuple() == (1, 1)
        assert not l.is_even
        assert l.name == "(1)+(-1)"

    def test_vector_norm_checks_length(self, e8):
        """Test vector_norm validates the vector length."""
        assert vector_norm(e8, [1, 0, 0, 0, 0, 0, 0, 0]) == 2
        with pytest.raises(InvalidInput):
            vector_norm(e8, [1, 0])


class TestResolve:
    """Test lattice inputs: names, sums, inline JSON, files."""

    def test_builtin_name(self):
        """Test built-in names resolve first."""
        assert resolve_lattice("E8") is builtin_lattice("E8")

    def test_plus_joined_sum(self):
        """Test "H+H" resolves to a rank-4 lattice."""
        l = resolve_lattice("H+H")
        assert l.rank == 4
        assert l.signature.as_tuple() == (2, 2)
        assert l.name == "H+H"

    def test_inline_gram(self):
        """Test a bare Gram matrix as JSON."""
        l = resolve_lattice("[[2, 1], [1, 2]]")
        assert l.determinant == 3

    def test_inline_document(self):
        """Test a lattice document as JSON."""
        l = resolve_lattice('{"rank": 1, "gram": [[-1]], "name": "minus"}')
        assert l.name == "minus"
        assert l.signature.as_tuple() == (0, 1)

    def test_document_rank_mismatch(self):
        """Test the rank field must match the Gram rows."""
        with pytest.raises(InvalidInput):
            load_lattice({"rank": 3, "gram": [[1]]})

    def test_malformed_json(self):
        """Test malformed inline JSON is a usage error."""
        with pytest.raises(InvalidInput):
            resolve_lattice("{rank: 1")

    def test_file_path(self, tmp_path):
        """Test a lattice document on disk."""
        path = tmp_path / "a2.json"
        path.write_text(json.dumps({"rank": 2, "gram": [[2, -1], [-1, 2]], "name": "A2"}))
        l = resolve_lattice(str(path))
        assert l.name == "A2"
        assert l.determinant == 3

    def test_missing_json_file(self, tmp_path):
        """Test a missing .json path is reported as bad input."""
        with pytest.raises(InvalidInput):
            resolve_lattice(str(tmp_path / "nope.json"))

    def test_unknown_source(self):
        """Test an unresolvable string raises UnknownLattice."""
        with pytest.raises(UnknownLattice):
            resolve_lattice("not-a-lattice")


class TestSignature:
    """Test congruence diagonalization."""

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_invariant_under_unimodular_congruence(self, k3, seed):
        """Test U G U^T has the signature and determinant of G for random unimodular U."""
        rng = random.Random(seed)
        n = k3.rank
        u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for _ in range(12):
            i, j = rng.sample(range(n), 2)
            k = rng.choice([-2, -1, 1, 2])
            u[i] = [a + k * b for a, b in zip(u[i], u[j])]
        assert determinant(u) in (1, -1)
        moved = make_lattice(mat_mul(mat_mul(u, k3.gram), transpose(u)))
        assert moved.signature.as_tuple() == (3, 19)
        assert determinant(moved.gram) == determinant(k3.gram)

    def test_zero_diagonal_fold(self):
        """Test H diagonalizes despite zero diagonal entries."""
        pivots = diagonalize([[0, 1], [1, 0]])
        assert len(pivots) == 2
        assert sorted(p > 0 for p in pivots) == [False, True]

    def test_degenerate_nullity(self):
        """Test a singular form reports its radical."""
        sig = signature([[1, 1], [1, 1]])
        assert sig.as_tuple() == (1, 0)
        assert sig.nullity == 1
        assert sig.is_degenerate

    @pytest.mark.parametrize("name", ["H", "E8", "-E8", "K3"])
    def test_agrees_with_sympy(self, name):
        """Test pivots against sympy determinant and rank."""
        l = builtin_lattice(name)
        matrix = sympy.Matrix(l.gram)
        # the product of pivots equals the determinant
        pivots = diagonalize(l.gram)
        product = 1
        for p in pivots:
            product *= p
        assert product == int(matrix.det())
        assert l.signature.positive + l.signature.negative == matrix.rank()


class TestEnumeration:
    """Test vector enumeration."""

    def test_e8_roots(self, e8):
        """Test E8 has 240 roots closed under negation."""
        roots = enumerate_vectors(e8, 2)
        assert len(roots) == 240
        assert set(roots) == {tuple(-x for x in v) for v in roots}
        assert roots == sorted(roots)

    def test_negative_e8_roots(self):
        """Test -E8 roots have norm -2."""
        assert len(enumerate_vectors(builtin_lattice("-E8"), -2)) == 240

    def test_wrong_sign_is_empty(self, e8):
        """Test a definite form has no vectors of the opposite sign."""
        assert enumerate_vectors(e8, -2) == []

    def test_slabs_do_not_change_result(self, e8):
        """Test slab partitioning merges to the same set."""
        assert enumerate_vectors(e8, 2, slabs=4) == enumerate_vectors(e8, 2)

    def test_indefinite_needs_box(self):
        """Test indefinite enumeration requires a box."""
        with pytest.raises(BoxRequired):
            enumerate_vectors(builtin_lattice("H"), -2)

    def test_hyperbolic_box(self):
        """Test norm -2 vectors of H inside a box of 2."""
        vectors = enumerate_vectors(builtin_lattice("H"), -2, box=2)
        assert vectors == [(-1, 1), (1, -1)]

    def test_indefinite_box_with_slabs(self):
        """Test slabs on an indefinite form."""
        h = builtin_lattice("H")
        assert enumerate_vectors(h, 0, box=3, slabs=3) == enumerate_vectors(h, 0, box=3)

    def test_slab_ranges_cover_box(self):
        """Test slab ranges partition [-box, box]."""
        ranges = slab_ranges(4, 3)
        assert ranges[0][0] == -4 and ranges[-1][1] == 4
        assert sum(hi - lo + 1 for lo, hi in ranges) == 9


class TestSublattice:
    """Test spans, complements and indices."""

    def test_single_root_in_k3(self, k3):
        """Test the complement of one root of -E8 has signature (3,18)."""
        root = [0] * 22
        root[6] = 1
        report = sublattice_report(k3, [root])
        assert report.span_rank == 1
        assert report.span_signature.as_tuple() == (0, 1)
        assert report.complement_signature.as_tuple() == (3, 18)
        assert len(report.complement_basis) == 21
        assert report.index_in_ambient == 2

    def test_unimodular_summand_has_index_one(self, k3):
        """Test the first H block splits off with index 1."""
        e1 = [1 if i == 0 else 0 for i in range(22)]
        e2 = [1 if i == 1 else 0 for i in range(22)]
        report = sublattice_report(k3, [e1, e2])
        assert report.span_signature.as_tuple() == (1, 1)
        assert report.index_in_ambient == 1

    def test_degenerate_span(self):
        """Test an isotropic line is flagged degenerate."""
        report = sublattice_report(builtin_lattice("H"), [[1, 0]])
        assert report.is_degenerate

    def test_dependent_vectors_collapse(self, e8):
        """Test dependent vectors give the span rank, not the count."""
        v = [1, 0, 0, 0, 0, 0, 0, 0]
        w = [2, 0, 0, 0, 0, 0, 0, 0]
        assert sublattice_report(e8, [v, w]).span_rank == 1

    def test_empty_input(self, e8):
        """Test an empty vector list is refused."""
        with pytest.raises(EmptyInput):
            sublattice_report(e8, [])


class TestIntegerAlgebra:
    """Test the Hermite reduction helpers."""

    def test_transform_is_unimodular(self):
        """Test U * A = H with det U = +/-1."""
        a = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
        h, u, rank = hermite_rows(a)
        assert mat_mul(u, a) == h
        assert abs(determinant(u)) == 1
        assert rank == 3

    def test_kernel(self):
        """Test the integer kernel of a rank-1 functional."""
        kernel = integer_kernel([[1, 2, 3]], 3)
        assert len(kernel) == 2
        for v in kernel:
            assert v[0] + 2 * v[1] + 3 * v[2] == 0

    def test_rational_rank(self):
        """Test rank over Q with Fractions."""
        from fractions import Fraction

        assert rational_rank([[Fraction(1, 2), 1], [1, 2]]) == 1
        assert rational_rank([]) == 0
