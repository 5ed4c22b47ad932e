"""
Isometry - reflections, spinor norm and the sign classification

An isometry acts on lattice coordinates (column vectors) and satisfies
M^T G M = G. The spinor norm is computed by an explicit factorization into
rational reflections; a reflection through v contributes sign(<v, v>).

Subgroup tags:
- Aut''               det = +1, spin = +1
- Aut'\\Aut''          det = -1, spin = -1   (det * spin = +1)
- Aut\\Aut'-detspin    det = -1, spin = +1   (image of the det*spin section)
- Aut\\Aut'-other      det = +1, spin = -1
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ValidationError

from .errors import (
    DegenerateForm,
    InternalInconsistency,
    InvalidInput,
    IsotropicVector,
    LatticeMismatch,
    NotAnIsometry,
    NotIntegral,
)
from .integer import determinant, identity_matrix, mat_mul, mat_vec, transpose
from .lattice import Lattice, Vector, direct_sum, load_lattice, make_lattice, resolve_lattice

logger = logging.getLogger(__name__)

FracMatrix = List[List[Fraction]]


class SubgroupTag(Enum):
    """Position of an isometry in Aut(Q) > Aut' > Aut''."""
    AUT_DOUBLE_PRIME = "Aut''"
    AUT_PRIME_ONLY = "Aut'\\Aut''"
    OUTSIDE_DETSPIN = "Aut\\Aut'-detspin"
    OUTSIDE_OTHER = "Aut\\Aut'-other"

    @classmethod
    def from_signs(cls, det: int, spin: int) -> "SubgroupTag":
        if det == 1 and spin == 1:
            return cls.AUT_DOUBLE_PRIME
        if det == -1 and spin == -1:
            return cls.AUT_PRIME_ONLY
        if det == -1:
            return cls.OUTSIDE_DETSPIN
        return cls.OUTSIDE_OTHER

    @property
    def in_aut_prime(self) -> bool:
        return self in (SubgroupTag.AUT_DOUBLE_PRIME, SubgroupTag.AUT_PRIME_ONLY)


@dataclass(frozen=True)
class Isometry:
    """Integer matrix preserving the Gram form of its lattice."""
    matrix: Tuple[Tuple[int, ...], ...]
    lattice: Lattice = field(compare=False)

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @cached_property
    def determinant(self) -> int:
        return determinant(self.matrix)

    def apply(self, v: Sequence[int]) -> Vector:
        return tuple(mat_vec(self.matrix, v))

    def is_identity(self) -> bool:
        return all(self.matrix[i][j] == (1 if i == j else 0) for i in range(self.rank) for j in range(self.rank))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lattice": self.lattice.label(),
            "matrix": [list(row) for row in self.matrix],
            "determinant": self.determinant,
        }


@dataclass(frozen=True)
class IsometryClass:
    determinant: int
    spinor_norm: int
    subgroup_tag: SubgroupTag

    def to_dict(self) -> Dict[str, Any]:
        return {
            "determinant": self.determinant,
            "spinor_norm": self.spinor_norm,
            "subgroup_tag": self.subgroup_tag.value,
            "in_aut_prime": self.subgroup_tag.in_aut_prime,
        }


@dataclass
class SplittingSections:
    """Reflections realizing sections of the two sign quotients."""
    detspin_vector: Optional[Vector]
    detspin_section: Optional[Isometry]
    det_vector: Optional[Vector]
    det_section: Optional[Isometry]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "detspin_section": {
                "vector": list(self.detspin_vector) if self.detspin_vector else None,
                "class": classify(self.detspin_section).to_dict() if self.detspin_section else None,
            },
            "det_section": {
                "vector": list(self.det_vector) if self.det_vector else None,
                "class": classify(self.det_section).to_dict() if self.det_section else None,
            },
        }


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def preserves_form(l: Lattice, matrix: Sequence[Sequence[int]]) -> bool:
    return mat_mul(mat_mul(transpose(matrix), l.gram), matrix) == [list(r) for r in l.gram]


def make_isometry(l: Lattice, matrix: Sequence[Sequence[int]]) -> Isometry:
    """Wrap a matrix after checking shape and M^T G M = G."""
    rows = [list(r) for r in matrix]
    if len(rows) != l.rank or any(len(r) != l.rank for r in rows):
        raise InvalidInput(f"isometry matrix must be {l.rank} x {l.rank}")
    if not preserves_form(l, rows):
        raise NotAnIsometry(f"matrix does not preserve the form of {l.label()}")
    return Isometry(matrix=tuple(tuple(int(x) for x in r) for r in rows), lattice=l)


def identity(l: Lattice) -> Isometry:
    return Isometry(matrix=tuple(tuple(r) for r in identity_matrix(l.rank)), lattice=l)


def reflection(l: Lattice, v: Sequence[int]) -> Isometry:
    """x -> x - 2<x,v>/<v,v> v, rejected when isotropic or non-integral."""
    if len(v) != l.rank:
        raise InvalidInput(f"vector {list(v)} has length {len(v)}, lattice rank is {l.rank}")
    n = l.norm(v)
    if n == 0:
        raise IsotropicVector(f"<v,v> = 0 for v = {list(v)}")
    gv = l.dual_functional(v)
    rows = []
    for i in range(l.rank):
        row = []
        for j in range(l.rank):
            numerator = -2 * v[i] * gv[j]
            if numerator % n:
                raise NotIntegral(
                    f"reflection through {list(v)} has entry {Fraction(numerator, n)} off the integers at ({i},{j})",
                    {"vector": list(v), "norm": n},
                )
            row.append(numerator // n + (1 if i == j else 0))
        rows.append(tuple(row))
    return Isometry(matrix=tuple(rows), lattice=l)


def compose(g: Isometry, h: Isometry) -> Isometry:
    """g o h (apply h first)."""
    if g.lattice.gram != h.lattice.gram:
        raise LatticeMismatch(f"cannot compose isometries of {g.lattice.label()} and {h.lattice.label()}")
    product = mat_mul(g.matrix, h.matrix)
    return Isometry(matrix=tuple(tuple(r) for r in product), lattice=g.lattice)


def direct_sum_isometry(g: Isometry, other: Lattice) -> Isometry:
    """g + id on lattice(g) + other."""
    n, m = g.rank, other.rank
    rows = [list(r) + [0] * m for r in g.matrix]
    rows += [[0] * n + [1 if i == j else 0 for j in range(m)] for i in range(m)]
    return Isometry(matrix=tuple(tuple(r) for r in rows), lattice=direct_sum(g.lattice, other))


# ---------------------------------------------------------------------------
# Spinor norm
# ---------------------------------------------------------------------------

class _RationalForm:
    """Bilinear form helpers over Q for one Gram matrix."""

    def __init__(self, gram: Sequence[Sequence[int]]):
        self.gram = gram
        self.n = len(gram)

    def pair(self, u: Sequence[Fraction], w: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for i, ui in enumerate(u):
            if ui:
                row = self.gram[i]
                total += ui * sum((g * x for g, x in zip(row, w) if g and x), Fraction(0))
        return total

    def apply(self, w: Sequence[Fraction]) -> List[Fraction]:
        """G w."""
        return [sum((g * x for g, x in zip(row, w) if g and x), Fraction(0)) for row in self.gram]

    def reflect_left(self, h: FracMatrix, v: List[Fraction]) -> None:
        """h <- s_v h in place."""
        nv = self.pair(v, v)
        # s_v h = h - (2/<v,v>) v (v^T G h)
        gv = [sum((v[i] * self.gram[i][j] for i in range(self.n) if v[i]), Fraction(0)) for j in range(self.n)]
        row = [sum((gv[i] * h[i][j] for i in range(self.n) if gv[i]), Fraction(0)) for j in range(self.n)]
        scale = Fraction(2) / nv
        for i in range(self.n):
            if v[i]:
                f = scale * v[i]
                hi = h[i]
                for j in range(self.n):
                    if row[j]:
                        hi[j] -= f * row[j]


def _is_identity(h: FracMatrix) -> bool:
    return all(h[i][j] == (1 if i == j else 0) for i in range(len(h)) for j in range(len(h)))


def _candidates(
    form: _RationalForm,
    h: FracMatrix,
    fixed: List[Tuple[List[Fraction], List[Fraction], Fraction]],
) -> Iterator[Tuple[List[Fraction], List[Fraction]]]:
    """
    (x, hx - x) for projections x of e_i, then of e_i + e_j, onto the
    complement of the fixed vectors. Basis vectors moved by h come first.
    """
    n = form.n
    # h fixes every chosen vector, so h p(e_i) - p(e_i) = h e_i - e_i
    moved = [[h[r][i] - (1 if r == i else 0) for r in range(n)] for i in range(n)]
    order = [i for i in range(n) if any(moved[i])] + [i for i in range(n) if not any(moved[i])]
    projected: Dict[int, List[Fraction]] = {}

    def project(i: int) -> List[Fraction]:
        if i not in projected:
            y = [Fraction(1 if k == i else 0) for k in range(n)]
            # <e_i, x> is the i-th entry of G x
            for x, gx, nx in fixed:
                c = gx[i] / nx
                if c:
                    y = [a - c * b for a, b in zip(y, x)]
            projected[i] = y
        return projected[i]

    for i in order:
        yield project(i), moved[i]
    for a, i in enumerate(order):
        for j in order[a + 1:]:
            yield [p + q for p, q in zip(project(i), project(j))], [p + q for p, q in zip(moved[i], moved[j])]


def reflection_factorization(g: Isometry) -> List[Tuple[List[Fraction], int]]:
    """
    Factor g into rational reflections, returning (vector, sign of norm) pairs.

    Works down an orthogonal flag: each round picks an anisotropic x in the
    current complement and makes it fixed. If gx - x is anisotropic one
    reflection suffices; otherwise gx + x has norm 4<x,x> and the pair
    s_x s_{gx+x} sends gx back to x. At most two reflections per dimension.
    """
    l = g.lattice
    if not l.is_nondegenerate:
        raise DegenerateForm(f"{l.label()} has determinant 0")

    form = _RationalForm(l.gram)
    h: FracMatrix = [[Fraction(x) for x in row] for row in g.matrix]
    fixed: List[Tuple[List[Fraction], List[Fraction], Fraction]] = []
    factors: List[Tuple[List[Fraction], int]] = []

    def reflect(v: List[Fraction]) -> None:
        sign = 1 if form.pair(v, v) > 0 else -1
        form.reflect_left(h, v)
        factors.append((v, sign))

    while not _is_identity(h):
        if len(fixed) >= form.n:
            raise InternalInconsistency("reflection factorization did not converge")
        best = None
        fallback = None
        for x, moved in _candidates(form, h, fixed):
            nx = form.pair(x, x)
            if nx == 0:
                continue
            hx = [a + b for a, b in zip(x, moved)]
            if not any(moved):
                fallback = fallback or (x, None, None)
                continue
            if form.pair(moved, moved) != 0:
                best = (x, hx, moved)
                break
            if fallback is None or fallback[1] is None:
                fallback = (x, hx, moved)
        choice = best or fallback
        if choice is None:
            raise InternalInconsistency("no anisotropic vector in a nondegenerate complement")

        x, hx, moved = choice
        if hx is not None:
            if form.pair(moved, moved) != 0:
                reflect(moved)
                logger.debug("Round %d: one reflection", len(fixed))
            else:
                reflect([a + b for a, b in zip(hx, x)])
                reflect(list(x))
                logger.debug("Round %d: isotropic difference, auxiliary pair", len(fixed))
        fixed.append((x, form.apply(x), form.pair(x, x)))

    if (-1) ** len(factors) != g.determinant:
        raise InternalInconsistency(
            f"{len(factors)} reflections but determinant {g.determinant}"
        )
    return factors


def spinor_norm(g: Isometry) -> int:
    """Product of sign(<v,v>) over a reflection factorization; identity gives +1."""
    sign = 1
    for _, s in reflection_factorization(g):
        sign *= s
    return sign


def classify(g: Isometry) -> IsometryClass:
    det = g.determinant
    spin = spinor_norm(g)
    return IsometryClass(determinant=det, spinor_norm=spin, subgroup_tag=SubgroupTag.from_signs(det, spin))


# ---------------------------------------------------------------------------
# Sections of the sign quotients
# ---------------------------------------------------------------------------

def _short_vectors(rank: int) -> List[Vector]:
    vectors: List[Vector] = []
    for i in range(rank):
        vectors.append(tuple(1 if k == i else 0 for k in range(rank)))
    for i in range(rank):
        for j in range(i + 1, rank):
            for s in (1, -1):
                vectors.append(tuple(1 if k == i else (s if k == j else 0) for k in range(rank)))
    return vectors


def splitting_sections(l: Lattice) -> SplittingSections:
    """
    Integral reflections splitting Aut(Q) -> Z/2 (det * spin) and Aut' -> Z/2 (det).

    A reflection through a positive vector has det -1 and spin +1, so -1 -> R
    splits the det*spin quotient. A negative vector gives det -1, spin -1,
    which lies in Aut' and splits the determinant there. Candidates are basis
    vectors and e_i +/- e_j, which covers an H summand via (1, +/-1) and a
    (1) + (-1) summand via its basis vectors.
    """
    if not l.is_nondegenerate:
        raise DegenerateForm(f"{l.label()} has determinant 0")

    found: Dict[int, Tuple[Vector, Isometry]] = {}
    for v in _short_vectors(l.rank):
        n = l.norm(v)
        if n == 0 or (1 if n > 0 else -1) in found:
            continue
        try:
            r = reflection(l, v)
        except NotIntegral:
            continue
        found[1 if n > 0 else -1] = (v, r)
        if len(found) == 2:
            break

    pos = found.get(1)
    neg = found.get(-1)
    return SplittingSections(
        detspin_vector=pos[0] if pos else None,
        detspin_section=pos[1] if pos else None,
        det_vector=neg[0] if neg else None,
        det_section=neg[1] if neg else None,
    )


# ---------------------------------------------------------------------------
# Interchange
# ---------------------------------------------------------------------------

class IsometryDocument(BaseModel):
    """JSON interchange: {"lattice": <name, gram or lattice document>, "matrix": [[...]]}."""
    lattice: Union[str, List[List[int]], Dict[str, Any]]
    matrix: List[List[int]]


def load_isometry(source: Union[str, Dict[str, Any]]) -> Isometry:
    """Parse inline JSON, a file path or a dict, verifying gram preservation."""
    if isinstance(source, str):
        try:
            if source.strip().startswith("{"):
                data = json.loads(source)
            else:
                with open(source, "r", encoding="utf-8") as handle:
                    data = json.load(handle)
        except (OSError, json.JSONDecodeError) as e:
            raise InvalidInput(f"cannot read isometry document: {e}") from e
    else:
        data = source

    try:
        doc = IsometryDocument.model_validate(data)
    except ValidationError as e:
        raise InvalidInput(f"invalid isometry document: {e}") from e

    if isinstance(doc.lattice, str):
        l = resolve_lattice(doc.lattice)
    elif isinstance(doc.lattice, dict):
        l = load_lattice(doc.lattice)
    else:
        l = make_lattice(doc.lattice)
    return make_isometry(l, doc.matrix)


__all__ = [
    "SubgroupTag",
    "Isometry",
    "IsometryClass",
    "SplittingSections",
    "preserves_form",
    "make_isometry",
    "identity",
    "reflection",
    "compose",
    "direct_sum_isometry",
    "reflection_factorization",
    "spinor_norm",
    "classify",
    "splitting_sections",
    "IsometryDocument",
    "load_isometry",
]
