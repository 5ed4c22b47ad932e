"""
Lattice Core - exact integer lattice arithmetic

A lattice is a free Z-module with an integer symmetric Gram matrix. Everything
here is exact: Python integers for coordinates and Gram entries, Fractions for
the congruence diagonalization, sympy for determinants.

Built-in forms:
- H      hyperbolic plane [[0,1],[1,0]]
- E8     Cartan matrix of E8 (even, positive definite, unimodular)
- -E8    its negation
- K3     H + H + H + (-E8) + (-E8), signature (3,19)
- (1), (-1)  rank-1 odd unimodular forms
"""

import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import sympy
from pydantic import BaseModel, ValidationError, model_validator

from .errors import (
    BoxRequired,
    DegenerateForm,
    EmptyInput,
    InternalInconsistency,
    InvalidInput,
    NonSymmetric,
    UnknownLattice,
)
from .integer import determinant, integer_kernel, mat_mul, span_basis, transpose

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]
Gram = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class Signature:
    """Counts of positive and negative pivots plus the radical dimension."""
    positive: int
    negative: int
    nullity: int = 0

    @property
    def is_degenerate(self) -> bool:
        return self.nullity > 0

    def as_tuple(self) -> Tuple[int, int]:
        return (self.positive, self.negative)

    def __str__(self) -> str:
        return f"({self.positive},{self.negative})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.positive,
            "q": self.negative,
            "nullity": self.nullity,
            "degenerate": self.is_degenerate,
        }


@dataclass(frozen=True)
class Lattice:
    """Finite-rank free Z-module with an exact symmetric Gram matrix."""
    gram: Gram
    name: Optional[str] = field(default=None, compare=False)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def determinant(self) -> int:
        return determinant(self.gram)

    @property
    def is_unimodular(self) -> bool:
        return abs(self.determinant) == 1

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def is_nondegenerate(self) -> bool:
        return self.determinant != 0

    @cached_property
    def signature(self) -> Signature:
        return signature(self)

    def pairing(self, u: Sequence[int], v: Sequence[int]) -> int:
        """Bilinear form <u, v> = u^T G v."""
        return sum(u[i] * sum(g * x for g, x in zip(row, v)) for i, row in enumerate(self.gram) if u[i])

    def norm(self, v: Sequence[int]) -> int:
        return self.pairing(v, v)

    def dual_functional(self, v: Sequence[int]) -> List[int]:
        """Row vector v^T G."""
        return [sum(v[i] * self.gram[i][j] for i in range(self.rank)) for j in range(self.rank)]

    def basis_vector(self, i: int) -> Vector:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def label(self) -> str:
        return self.name or f"rank-{self.rank}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "rank": self.rank,
            "gram": [list(row) for row in self.gram],
            "determinant": self.determinant,
            "even": self.is_even,
            "unimodular": self.is_unimodular,
            "signature": self.signature.to_dict(),
        }


@dataclass
class SublatticeReport:
    """Span, orthogonal complement and index data for a set of vectors."""
    span_basis: List[Vector]
    span_gram: List[List[int]]
    span_rank: int
    span_signature: Signature
    complement_basis: List[Vector]
    complement_gram: List[List[int]]
    complement_signature: Signature
    index_in_ambient: Union[int, str]

    @property
    def is_degenerate(self) -> bool:
        return self.index_in_ambient == "degenerate"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "span_basis": [list(v) for v in self.span_basis],
            "span_gram": self.span_gram,
            "span_rank": self.span_rank,
            "span_signature": self.span_signature.to_dict(),
            "complement_basis": [list(v) for v in self.complement_basis],
            "complement_gram": self.complement_gram,
            "complement_signature": self.complement_signature.to_dict(),
            "index_in_ambient": self.index_in_ambient,
        }


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def make_lattice(gram: Sequence[Sequence[int]], name: Optional[str] = None) -> Lattice:
    """Build a lattice, rejecting non-square or non-symmetric Gram matrices."""
    try:
        rows = [list(r) for r in gram]
    except TypeError as e:
        raise InvalidInput(f"Gram matrix must be a list of rows: {e}") from e
    n = len(rows)
    if n == 0:
        raise EmptyInput("Gram matrix is empty")
    if any(len(r) != n for r in rows):
        raise NonSymmetric(f"Gram matrix is not square ({n} rows)")
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise NonSymmetric(
                    f"gram[{i}][{j}] = {rows[i][j]} but gram[{j}][{i}] = {rows[j][i]}",
                    {"i": i, "j": j},
                )
    for r in rows:
        for x in r:
            try:
                integral = not isinstance(x, bool) and int(x) == x
            except (TypeError, ValueError):
                integral = False
            if not integral:
                raise InvalidInput(f"Gram entry {x!r} is not an integer")
    return Lattice(gram=tuple(tuple(int(x) for x in r) for r in rows), name=name)


def direct_sum(a: Lattice, b: Lattice, name: Optional[str] = None) -> Lattice:
    """Block-diagonal sum a + b."""
    n, m = a.rank, b.rank
    rows = [list(r) + [0] * m for r in a.gram] + [[0] * n + list(r) for r in b.gram]
    if name is None and a.name and b.name:
        name = f"{a.name}+{b.name}"
    return make_lattice(rows, name=name)


def scale(l: Lattice, factor: int, name: Optional[str] = None) -> Lattice:
    return make_lattice([[factor * x for x in row] for row in l.gram], name=name)


def _e8_gram() -> List[List[int]]:
    # Dynkin chain 1-3-4-5-6-7-8 with node 2 attached to node 4.
    edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]
    gram = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in edges:
        gram[i][j] = gram[j][i] = -1
    return gram


@lru_cache(maxsize=None)
def builtin_lattice(name: str) -> Lattice:
    """Resolve one of the named forms."""
    key = name.strip()
    if key == "H":
        return make_lattice([[0, 1], [1, 0]], name="H")
    if key == "E8":
        return make_lattice(_e8_gram(), name="E8")
    if key == "-E8":
        return scale(builtin_lattice("E8"), -1, name="-E8")
    if key == "(1)":
        return make_lattice([[1]], name="(1)")
    if key == "(-1)":
        return make_lattice([[-1]], name="(-1)")
    if key == "K3":
        h = builtin_lattice("H")
        e = builtin_lattice("-E8")
        result = h
        for part in (h, h, e, e):
            result = direct_sum(result, part)
        return Lattice(gram=result.gram, name="K3")
    raise UnknownLattice(f"unknown lattice name: {name}")


BUILTIN_NAMES = ("H", "E8", "-E8", "K3", "(1)", "(-1)")


class LatticeDocument(BaseModel):
    """JSON interchange: {"rank": n, "gram": [[...], ...]}."""
    rank: int
    gram: List[List[int]]
    name: Optional[str] = None

    @model_validator(mode="after")
    def _check_shape(self) -> "LatticeDocument":
        if self.rank != len(self.gram):
            raise ValueError(f"rank {self.rank} does not match {len(self.gram)} Gram rows")
        return self


def load_lattice(data: Any) -> Lattice:
    """Validate a {"rank", "gram", "name"} document and build the lattice."""
    try:
        doc = LatticeDocument.model_validate(data)
    except ValidationError as e:
        raise InvalidInput(f"invalid lattice document: {e}") from e
    return make_lattice(doc.gram, name=doc.name)


def resolve_lattice(source: Union[str, Dict[str, Any], Lattice]) -> Lattice:
    """Built-in name (or a "+"-joined sum of them) first, then inline JSON (a lattice document or a bare Gram matrix), then a file path."""
    if isinstance(source, Lattice):
        return source
    if isinstance(source, dict):
        return load_lattice(source)
    if source in BUILTIN_NAMES:
        return builtin_lattice(source)
    parts = source.split("+")
    if len(parts) > 1 and all(p in BUILTIN_NAMES for p in parts):
        result = builtin_lattice(parts[0])
        for part in parts[1:]:
            result = direct_sum(result, builtin_lattice(part))
        return Lattice(gram=result.gram, name=source)
    if source.lstrip().startswith(("{", "[")):
        try:
            data = json.loads(source)
            return make_lattice(data) if isinstance(data, list) else load_lattice(data)
        except json.JSONDecodeError as e:
            raise InvalidInput(f"malformed lattice JSON: {e}") from e
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        if not path.exists():
            raise InvalidInput(f"lattice file not found: {source}")
        with open(path, "r", encoding="utf-8") as handle:
            return load_lattice(json.load(handle))
    raise UnknownLattice(f"not a built-in name, file or JSON document: {source}")


# ---------------------------------------------------------------------------
# Invariants
# ---------------------------------------------------------------------------

def diagonalize(gram: Sequence[Sequence[int]]) -> List[Fraction]:
    """
    Symmetric congruence diagonalization over Q.

    Returns the nonzero pivots. When every remaining diagonal entry is zero
    but some off-diagonal a_ij is not, row/column j is added to i, which makes
    the new a_ii = 2 a_ij nonzero.
    """
    a = [[Fraction(x) for x in row] for row in gram]
    active = list(range(len(a)))
    pivots: List[Fraction] = []

    while active:
        i = next((k for k in active if a[k][k] != 0), None)
        if i is None:
            pair = next(((r, c) for r in active for c in active if r != c and a[r][c] != 0), None)
            if pair is None:
                break
            i, j = pair
            for k in active:
                a[i][k] += a[j][k]
            for k in active:
                a[k][i] += a[k][j]
            logger.debug("Zero diagonal: folded index %d into %d", j, i)

        d = a[i][i]
        rest = [k for k in active if k != i]
        col = [a[k][i] for k in rest]
        for r, ar in zip(rest, col):
            if ar == 0:
                continue
            factor = ar / d
            row_r, row_i = a[r], a[i]
            for c in rest:
                if row_i[c]:
                    row_r[c] -= factor * row_i[c]
        pivots.append(d)
        active = rest

    return pivots


def signature(l: Union[Lattice, Sequence[Sequence[int]]]) -> Signature:
    """(p, q) by Sylvester's law of inertia; nullity reports degeneracy."""
    gram = l.gram if isinstance(l, Lattice) else l
    pivots = diagonalize(gram)
    p = sum(1 for d in pivots if d > 0)
    q = sum(1 for d in pivots if d < 0)
    return Signature(positive=p, negative=q, nullity=len(gram) - p - q)


# ---------------------------------------------------------------------------
# Vector enumeration
# ---------------------------------------------------------------------------

def _ldl(gram: Sequence[Sequence[int]]) -> Tuple[List[Fraction], List[List[Fraction]]]:
    """
    Q(v) = sum_i d[i] * (v_i + sum_{j>i} mu[i][j] v_j)^2 for positive definite gram.
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    d: List[Fraction] = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        for j in range(i + 1, n):
            mu[i][j] = a[i][j] / d[i]
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] -= a[r][i] * a[i][c] / d[i]
    return d, mu


def _floor_sqrt(x: Fraction) -> int:
    if x <= 0:
        return 0
    return math.isqrt(x.numerator // x.denominator)


def definite_box(l: Lattice, norm: int) -> int:
    """Coordinate bound |v_i| <= sqrt(|norm| * (G^-1)_ii) for definite forms."""
    inverse = sympy.Matrix(l.gram).inv()
    bound = 0
    for i in range(l.rank):
        entry = Fraction(int(inverse[i, i].p), int(inverse[i, i].q))
        bound = max(bound, _floor_sqrt(abs(norm) * abs(entry)))
    return bound


def _enumerate_definite(
    gram: Sequence[Sequence[int]],
    target: int,
    box: int,
    outer_range: Optional[Tuple[int, int]] = None,
) -> List[Vector]:
    """Fincke-Pohst search for Q(v) = target on a positive definite form."""
    n = len(gram)
    d, mu = _ldl(gram)
    results: List[Vector] = []
    coords = [0] * n

    def search(i: int, budget: Fraction) -> None:
        center = -sum((mu[i][j] * coords[j] for j in range(i + 1, n)), Fraction(0))
        radius_sq = budget / d[i]
        spread = _floor_sqrt(radius_sq) + 1
        lo = max(-box, math.floor(center) - spread)
        hi = min(box, math.ceil(center) + spread)
        if i == n - 1 and outer_range is not None:
            lo, hi = max(lo, outer_range[0]), min(hi, outer_range[1])
        for x in range(lo, hi + 1):
            offset = x - center
            used = d[i] * offset * offset
            if used > budget:
                continue
            coords[i] = x
            if i == 0:
                if budget - used == 0:
                    results.append(tuple(coords))
            else:
                search(i - 1, budget - used)
        coords[i] = 0

    search(n - 1, Fraction(target))
    return results


def _enumerate_box(
    gram: Sequence[Sequence[int]],
    target: int,
    box: int,
    outer_range: Optional[Tuple[int, int]] = None,
) -> List[Vector]:
    """Pruned backtracking over a coordinate box for arbitrary forms."""
    n = len(gram)
    # tail[d] = sum_{i,j >= d} |G_ij|
    tail = [0] * (n + 1)
    for k in range(n - 1, -1, -1):
        tail[k] = tail[k + 1] + abs(gram[k][k]) + 2 * sum(abs(gram[k][j]) for j in range(k + 1, n))

    results: List[Vector] = []
    coords = [0] * n

    def search(depth: int, partial: int, linear: List[int]) -> None:
        if depth == n:
            if partial == target:
                results.append(tuple(coords))
            return
        slack = 2 * box * sum(abs(x) for x in linear[depth:]) + box * box * tail[depth]
        if abs(target - partial) > slack:
            return
        lo, hi = -box, box
        if depth == n - 1 and outer_range is not None:
            lo, hi = max(lo, outer_range[0]), min(hi, outer_range[1])
        row = gram[depth]
        for x in range(lo, hi + 1):
            coords[depth] = x
            new_partial = partial + 2 * x * linear[depth] + x * x * row[depth]
            new_linear = [lin + x * g for lin, g in zip(linear, row)] if x else linear
            search(depth + 1, new_partial, new_linear)
        coords[depth] = 0

    search(0, 0, [0] * n)
    return results


def slab_ranges(box: int, slabs: int) -> List[Tuple[int, int]]:
    """Split [-box, box] into `slabs` contiguous ranges."""
    width = 2 * box + 1
    slabs = max(1, min(slabs, width))
    ranges = []
    start = -box
    for k in range(slabs):
        size = width // slabs + (1 if k < width % slabs else 0)
        ranges.append((start, start + size - 1))
        start += size
    return ranges


def enumerate_vectors(
    l: Lattice,
    norm: int,
    box: Optional[int] = None,
    slabs: int = 1,
) -> List[Vector]:
    """
    All v with |v_i| <= box and v^T G v = norm, in lexicographic order.

    Definite lattices derive the box when none is given, so the result is the
    complete set of vectors of that norm. Indefinite lattices need a box.
    The search is split into `slabs` independent pieces along one coordinate
    and the pieces are merged.
    """
    sig = l.signature
    definite = sig.nullity == 0 and (sig.positive == 0 or sig.negative == 0)

    if definite:
        sign = 1 if sig.positive else -1
        gram = l.gram if sign == 1 else tuple(tuple(-x for x in row) for row in l.gram)
        target = sign * norm
        if target < 0:
            return []
        if box is None:
            box = definite_box(l, target)
            logger.debug("Auto box %d for %s, norm %d", box, l.label(), norm)
        pieces = [
            _enumerate_definite(gram, target, box, outer)
            for outer in slab_ranges(box, slabs)
        ]
    else:
        if box is None:
            raise BoxRequired(f"{l.label()} has signature {sig}; pass an explicit box")
        pieces = [
            _enumerate_box(l.gram, norm, box, outer)
            for outer in slab_ranges(box, slabs)
        ]

    merged = sorted(v for piece in pieces for v in piece)
    logger.debug("Enumerated %d vectors of norm %d in %d slabs", len(merged), norm, len(pieces))
    return merged


def vector_norm(l: Lattice, v: Sequence[int]) -> int:
    """<v, v>, after checking the vector length."""
    if len(v) != l.rank:
        raise InvalidInput(f"vector {list(v)} has length {len(v)}, lattice rank is {l.rank}")
    return l.norm(v)


# ---------------------------------------------------------------------------
# Sublattices
# ---------------------------------------------------------------------------

def gram_of(l: Lattice, basis: Sequence[Sequence[int]]) -> List[List[int]]:
    """B G B^T."""
    if not basis:
        return []
    return mat_mul(mat_mul(basis, l.gram), transpose(basis))


def sublattice_report(l: Lattice, vecs: Sequence[Sequence[int]]) -> SublatticeReport:
    """Span, saturated orthogonal complement and [L : P + P^perp]."""
    if not vecs:
        raise EmptyInput("sublattice_report needs at least one vector")
    for v in vecs:
        if len(v) != l.rank:
            raise InvalidInput(f"vector {list(v)} has length {len(v)}, lattice rank is {l.rank}")

    basis = [tuple(r) for r in span_basis(vecs)]
    span_gram = gram_of(l, basis)
    span_sig = signature(span_gram) if basis else Signature(0, 0, 0)

    functionals = [l.dual_functional(b) for b in basis]
    complement = [tuple(r) for r in integer_kernel(functionals, l.rank)]
    complement_gram = gram_of(l, complement)
    complement_sig = signature(complement_gram) if complement else Signature(0, 0, 0)

    span_det = determinant(span_gram) if basis else 1
    if span_det == 0 or not l.is_nondegenerate:
        logger.warning("Degenerate span of rank %d in %s", len(basis), l.label())
        index: Union[int, str] = "degenerate"
    else:
        complement_det = determinant(complement_gram) if complement else 1
        ratio = Fraction(abs(span_det) * abs(complement_det), abs(l.determinant))
        root = math.isqrt(ratio.numerator) if ratio.denominator == 1 else -1
        stacked = abs(determinant(list(basis) + list(complement)))
        if root * root != ratio or root != stacked:
            raise InternalInconsistency(
                f"index mismatch: det identity gives {ratio}, basis determinant gives {stacked}"
            )
        index = root

    return SublatticeReport(
        span_basis=basis,
        span_gram=span_gram,
        span_rank=len(basis),
        span_signature=span_sig,
        complement_basis=complement,
        complement_gram=complement_gram,
        complement_signature=complement_sig,
        index_in_ambient=index,
    )


__all__ = [
    "Vector",
    "Signature",
    "Lattice",
    "SublatticeReport",
    "make_lattice",
    "direct_sum",
    "scale",
    "builtin_lattice",
    "BUILTIN_NAMES",
    "LatticeDocument",
    "load_lattice",
    "resolve_lattice",
    "diagonalize",
    "signature",
    "definite_box",
    "enumerate_vectors",
    "slab_ranges",
    "vector_norm",
    "gram_of",
    "sublattice_report",
]
