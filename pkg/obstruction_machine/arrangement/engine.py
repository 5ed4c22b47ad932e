"""
Arrangement Homology Engine

Complements of finite arrangements of codimension-3 linear subspaces in an
odd-dimensional real space. When every k-fold intersection is transversal the
complement has free homology in even degrees with rank H_2n equal to the
number of n-element subsets of the arrangement.

The root arrangement of the K3 lattice is modeled on the tangent space of the
Grassmannian of positive 3-planes at a base plane t0: Hom(t0, t0-perp) is
R^(3x19) = R^57, and the condition that a root d is orthogonal to the moved
plane linearizes to the three equations X_a . c(d) = 0 with
c(d)_b = <w_b, d> for a basis w_b of t0-perp.
"""

import itertools
import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ValidationError, field_validator

from ..core.config import get_config
from ..core.errors import EvenAmbient, InvalidInput, NotARoot, ProportionalRoots, TransversalityFailure
from ..core.integer import rational_rank
from ..core.lattice import Lattice, builtin_lattice

logger = logging.getLogger(__name__)

Normal = Tuple[Fraction, ...]
Subspace = Tuple[Normal, ...]

CODIMENSION = 3


@dataclass(frozen=True)
class Arrangement:
    ambient_dim: int
    subspaces: Tuple[Subspace, ...]

    @property
    def size(self) -> int:
        return len(self.subspaces)

    def stacked_normals(self, indices: Sequence[int]) -> List[Normal]:
        return [normal for i in indices for normal in self.subspaces[i]]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ambient_dim": self.ambient_dim,
            "subspaces": [[list(n) for n in s] for s in self.subspaces],
        }


@dataclass
class TransversalityResult:
    transversal: bool
    witness: Optional[Tuple[int, ...]] = None
    witness_rank: Optional[int] = None
    expected_rank: Optional[int] = None
    subsets_checked: int = 0

    def __bool__(self) -> bool:
        return self.transversal

    def to_dict(self) -> Dict[str, Any]:
        return {
            "transversal": self.transversal,
            "witness": list(self.witness) if self.witness is not None else None,
            "witness_rank": self.witness_rank,
            "expected_rank": self.expected_rank,
            "subsets_checked": self.subsets_checked,
        }


@dataclass
class BettiTable:
    betti: Dict[int, int]
    valid_upto: int
    subspaces: int = 0
    ambient_dim: Optional[int] = None
    clamped: bool = False

    def rank(self, degree: int) -> int:
        return self.betti.get(degree, 0)

    def lines(self) -> List[str]:
        return [f"{d}:{self.betti[d]}" for d in sorted(self.betti)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subspaces": self.subspaces,
            "ambient_dim": self.ambient_dim,
            "valid_upto": self.valid_upto,
            "clamped": self.clamped,
            "betti": {str(d): self.betti[d] for d in sorted(self.betti)},
        }


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def make_arrangement(ambient_dim: int, subspaces: Sequence[Sequence[Sequence[Any]]]) -> Arrangement:
    """Validate shapes, normal ranks and pairwise distinctness."""
    if ambient_dim < 1:
        raise InvalidInput(f"ambient dimension must be positive, got {ambient_dim}")
    parsed: List[Subspace] = []
    for idx, normals in enumerate(subspaces):
        rows = tuple(tuple(Fraction(x) for x in n) for n in normals)
        if len(rows) != CODIMENSION:
            raise InvalidInput(f"subspace {idx} has {len(rows)} normals, expected {CODIMENSION}")
        if any(len(r) != ambient_dim for r in rows):
            raise InvalidInput(f"subspace {idx} has a normal of the wrong length")
        if rational_rank(rows) != CODIMENSION:
            raise InvalidInput(f"normals of subspace {idx} are linearly dependent")
        parsed.append(rows)

    for a, b in itertools.combinations(range(len(parsed)), 2):
        if rational_rank(list(parsed[a]) + list(parsed[b])) == CODIMENSION:
            raise InvalidInput(f"subspaces {a} and {b} coincide")

    return Arrangement(ambient_dim=ambient_dim, subspaces=tuple(parsed))


class ArrangementDocument(BaseModel):
    """JSON interchange: {"ambient_dim": N, "subspaces": [[normal, normal, normal], ...]}."""
    ambient_dim: int
    subspaces: List[List[List[Union[int, str]]]]

    @field_validator("subspaces")
    @classmethod
    def _rationals(cls, value):
        for s in value:
            for normal in s:
                for x in normal:
                    Fraction(x)
        return value


def load_arrangement(source: Union[str, Dict[str, Any]]) -> Arrangement:
    if isinstance(source, str):
        try:
            if source.strip().startswith("{"):
                data = json.loads(source)
            else:
                with open(source, "r", encoding="utf-8") as handle:
                    data = json.load(handle)
        except (OSError, json.JSONDecodeError) as e:
            raise InvalidInput(f"cannot read arrangement document: {e}") from e
    else:
        data = source
    try:
        doc = ArrangementDocument.model_validate(data)
    except (ValidationError, ValueError, ZeroDivisionError) as e:
        raise InvalidInput(f"invalid arrangement document: {e}") from e
    return make_arrangement(doc.ambient_dim, doc.subspaces)


# ---------------------------------------------------------------------------
# K3 root arrangement
# ---------------------------------------------------------------------------

def _base_plane(l: Lattice) -> Tuple[List[List[int]], List[List[int]]]:
    """
    t0 spanned by e_(2a-1) + e_(2a) in the three H blocks; t0-perp spanned by
    e_(2a-1) - e_(2a) and the sixteen -E8 basis vectors.
    """
    plane, perp = [], []
    for a in range(3):
        u = [0] * l.rank
        w = [0] * l.rank
        u[2 * a], u[2 * a + 1] = 1, 1
        w[2 * a], w[2 * a + 1] = 1, -1
        plane.append(u)
        perp.append(w)
    for i in range(6, l.rank):
        perp.append([1 if j == i else 0 for j in range(l.rank)])
    return plane, perp


def root_coordinates(l: Lattice, root: Sequence[int]) -> List[int]:
    """c(d)_b = <w_b, d> over the t0-perp basis."""
    _, perp = _base_plane(l)
    return [l.pairing(w, root) for w in perp]


def k3_arrangement_from_roots(roots: Sequence[Sequence[int]]) -> Arrangement:
    """
    One codimension-3 subspace of R^57 per root: normals e_a (x) c(d) for
    a = 1, 2, 3. d and -d define the same subspace and are rejected.
    """
    l = builtin_lattice("K3")
    if not roots:
        raise InvalidInput("at least one root is required")
    vectors = [tuple(r) for r in roots]
    for v in vectors:
        if len(v) != l.rank:
            raise InvalidInput(f"vector {list(v)} has length {len(v)}, K3 rank is {l.rank}")
        n = l.norm(v)
        if n != -2:
            raise NotARoot(f"{list(v)} has norm {n}", {"vector": list(v), "norm": n})
    # the subspace depends only on the line through c(d), not on d
    coordinates = [root_coordinates(l, v) for v in vectors]
    for a, b in itertools.combinations(range(len(vectors)), 2):
        if rational_rank([coordinates[a], coordinates[b]]) < 2:
            raise ProportionalRoots(
                f"roots {a} and {b} have proportional coordinates and cut out the same subspace",
                {"pair": [a, b]},
            )

    width = 3 * (l.rank - 3)
    subspaces = []
    for c in coordinates:
        normals = []
        for a in range(3):
            row = [0] * width
            row[a * len(c):(a + 1) * len(c)] = c
            normals.append(row)
        subspaces.append(normals)
    logger.debug("Root arrangement: %d subspaces in R^%d", len(subspaces), width)
    return make_arrangement(width, subspaces)


# ---------------------------------------------------------------------------
# Transversality and Betti numbers
# ---------------------------------------------------------------------------

def transversality_check(a: Arrangement, max_subset: Optional[int] = None) -> TransversalityResult:
    """
    Every subset S with |S| <= max_subset must have stacked normals of rank
    min(3|S|, N). Subsets are visited by size, then lexicographically; the
    first failure is the witness.
    """
    top = a.size if max_subset is None else max_subset
    if top > a.size:
        raise InvalidInput(f"max_subset {top} exceeds the {a.size} subspaces")
    checked = 0
    for size in range(1, top + 1):
        expected = min(CODIMENSION * size, a.ambient_dim)
        for subset in itertools.combinations(range(a.size), size):
            checked += 1
            rank = rational_rank(a.stacked_normals(subset))
            if rank != expected:
                logger.debug("Transversality fails on %s: rank %d < %d", subset, rank, expected)
                return TransversalityResult(
                    transversal=False,
                    witness=subset,
                    witness_rank=rank,
                    expected_rank=expected,
                    subsets_checked=checked,
                )
    return TransversalityResult(transversal=True, subsets_checked=checked)


def betti_window(ambient_dim: int) -> int:
    """Largest n for which rank H_2n = C(m, n) is asserted."""
    return min(ambient_dim // 4 + 1, ambient_dim // 3)


def betti_complement(a: Arrangement, max_degree: Optional[int] = None) -> BettiTable:
    """betti[2n] = C(m, n) and odd degrees vanish, inside the validity window."""
    N = a.ambient_dim
    if N % 2 == 0:
        raise EvenAmbient(f"ambient dimension {N} is even")
    requested = get_config().arrangement.max_degree if max_degree is None else max_degree
    if requested < 0:
        raise InvalidInput(f"max_degree must be >= 0, got {requested}")

    limit = 2 * betti_window(N)
    clamped = requested > limit
    if clamped:
        logger.warning("Degree %d is outside the validity window for N=%d; clamped to %d", requested, N, limit)
    top = min(requested, limit)

    check = transversality_check(a, min(a.size, top // 2))
    if not check:
        raise TransversalityFailure(
            f"subspaces {list(check.witness)} meet with rank {check.witness_rank} < {check.expected_rank}",
            check.to_dict(),
        )

    m = a.size
    betti = {d: (math.comb(m, d // 2) if d % 2 == 0 else 0) for d in range(top + 1)}
    return BettiTable(betti=betti, valid_upto=top, subspaces=m, ambient_dim=N, clamped=clamped)


def single_subspace_betti(codim: int = CODIMENSION) -> BettiTable:
    """The complement of one codim-c subspace retracts onto S^(c-1)."""
    if codim < 1:
        raise InvalidInput(f"codimension must be >= 1, got {codim}")
    top = codim - 1
    betti = {d: 0 for d in range(top + 1)}
    betti[0] += 1
    betti[top] += 1
    return BettiTable(betti=betti, valid_upto=top, subspaces=1)


def poincare_polynomial(table: BettiTable) -> List[int]:
    """Coefficients of sum_n betti[2n] t^n."""
    return [table.rank(2 * n) for n in range(table.valid_upto // 2 + 1)]


__all__ = [
    "Arrangement",
    "TransversalityResult",
    "BettiTable",
    "make_arrangement",
    "ArrangementDocument",
    "load_arrangement",
    "root_coordinates",
    "k3_arrangement_from_roots",
    "transversality_check",
    "betti_window",
    "betti_complement",
    "single_subspace_betti",
    "poincare_polynomial",
]
