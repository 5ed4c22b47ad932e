"""
Integer Linear Algebra

Row-style Hermite reduction with a unimodular transform. The span basis of a
set of integer vectors is the nonzero part of the reduced matrix; the rows of
the transform that land on zero rows give a saturated basis of the integer
kernel, since the transform is invertible over the integers.
"""

import logging
from typing import List, Sequence, Tuple

from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

IntMatrix = List[List[int]]


def extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b = g = gcd(a, b) >= 0."""
    x, y, g = ZZ.gcdex(ZZ(a), ZZ(b))
    x, y, g = int(x), int(y), int(g)
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def identity_matrix(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(matrix: Sequence[Sequence[int]]) -> IntMatrix:
    if not matrix:
        return []
    return [list(col) for col in zip(*matrix)]


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a: Sequence[Sequence[int]], v: Sequence[int]) -> List[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant over ZZ (fraction-free elimination)."""
    if not matrix:
        return 1
    return int(DomainMatrix.from_list([[int(x) for x in row] for row in matrix], ZZ).det())


def _combine_rows(rows: IntMatrix, p: int, i: int, coeffs: Tuple[int, int, int, int]) -> None:
    """Replace (row_p, row_i) by (a*row_p + b*row_i, c*row_p + d*row_i)."""
    a, b, c, d = coeffs
    rp, ri = rows[p], rows[i]
    rows[p] = [a * x + b * y for x, y in zip(rp, ri)]
    rows[i] = [c * x + d * y for x, y in zip(rp, ri)]


def hermite_rows(matrix: Sequence[Sequence[int]]) -> Tuple[IntMatrix, IntMatrix, int]:
    """
    Row-reduce an integer matrix to Hermite normal form.

    Returns (H, U, rank) with U unimodular and U * matrix = H. The first
    `rank` rows of H are a basis of the row span; rows rank.. of U span the
    left kernel.
    """
    rows = [list(map(int, r)) for r in matrix]
    m = len(rows)
    width = len(rows[0]) if m else 0
    transform = identity_matrix(m)
    pivot = 0

    for col in range(width):
        if pivot >= m:
            break
        for i in range(pivot + 1, m):
            b = rows[i][col]
            if b == 0:
                continue
            a = rows[pivot][col]
            x, y, g = extended_gcd(a, b)
            coeffs = (x, y, -b // g, a // g)
            _combine_rows(rows, pivot, i, coeffs)
            _combine_rows(transform, pivot, i, coeffs)
        if rows[pivot][col] == 0:
            continue
        if rows[pivot][col] < 0:
            rows[pivot] = [-x for x in rows[pivot]]
            transform[pivot] = [-x for x in transform[pivot]]
        lead = rows[pivot][col]
        for r in range(pivot):
            q = rows[r][col] // lead
            if q:
                rows[r] = [x - q * y for x, y in zip(rows[r], rows[pivot])]
                transform[r] = [x - q * y for x, y in zip(transform[r], transform[pivot])]
        pivot += 1

    logger.debug("Hermite reduction: %d x %d, rank %d", m, width, pivot)
    return rows, transform, pivot


def span_basis(vectors: Sequence[Sequence[int]]) -> IntMatrix:
    """Basis of the integer span of `vectors` (nonzero Hermite rows)."""
    reduced, _, rank = hermite_rows(vectors)
    return reduced[:rank]


def integer_kernel(matrix: Sequence[Sequence[int]], width: int) -> IntMatrix:
    """
    Saturated basis of {x in Z^width : matrix * x = 0}.

    Reduces the transpose; transform rows that reach zero are kernel vectors.
    """
    if not matrix:
        return identity_matrix(width)
    _, transform, rank = hermite_rows(transpose(matrix))
    return span_basis(transform[rank:]) if rank < width else []


def rational_rank(matrix: Sequence[Sequence]) -> int:
    """Rank over the rationals; entries may be ints or Fractions."""
    if not matrix or not matrix[0]:
        return 0
    rows = [[(int(x.numerator), int(x.denominator)) for x in row] for row in matrix]
    return DomainMatrix.from_list(rows, QQ).rank()
