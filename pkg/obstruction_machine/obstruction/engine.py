"""
Obstruction Engine - decision procedures for section obstructions

Combines:
1. Flat-bundle vanishing: l_i restricts to zero on flat bundles when i > k.
2. Stable ranges: H*(SO+(p,q); R) is known in degrees <= floor((p+q)/2) - 2,
   and the map to the mapping class group is an isomorphism in degrees
   <= min(2q, floor((p+q)/2) - 2).
3. Surface products: kappa products are nonzero in degrees <= max(g)/2 - 1.
4. Root tuples: stabilizers sit in SO+(3 - n1, 19 - n2) up to a finite group.

A candidate in range is not an obstruction by itself; the report only
certifies when nonvanishing is supplied (a K3 summand or a large genus).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..core.errors import DegenerateForm, InvalidInput, NotARoot, OddArity, RankTooSmall, RegionTooLarge
from ..core.lattice import Lattice, Signature, SublatticeReport, builtin_lattice, sublattice_report

logger = logging.getLogger(__name__)

MAX_REGION_DEGREE = 9

VERDICT_OBSTRUCTED = "section obstructed"
VERDICT_CANDIDATES = "candidates only — nontriviality not certified"

# Named reasoning steps attached by --cite
STEP_FLAT_VANISHING = "flat-bundle vanishing: l_i = 0 on flat bundles for i > k (degree above 8k)"
STEP_STABLE_RANGE = "stable range: l_i detected for 4i <= min(2q, floor((p+q)/2) - 2)"
STEP_K3_SUMMAND = "K3 summand: l_2 is nonzero for manifolds with K3 as a connected summand"
STEP_SURFACE_GENUS = "surface product: kappa products nonzero in degrees <= max(g)/2 - 1"
STEP_CONDITIONAL = "range membership alone does not certify nonvanishing"


@dataclass(frozen=True)
class StableRange:
    p: int
    q: int
    bijective_upto: int
    iso_upto_with_2q: int
    connectivity: int
    root_type: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "q": self.q,
            "bijective_upto": self.bijective_upto,
            "iso_upto_with_2q": self.iso_upto_with_2q,
            "connectivity": self.connectivity,
            "root_type": self.root_type,
        }


@dataclass(frozen=True)
class Candidate:
    i: int
    degree: int
    in_stable_range: bool
    bott_obstruction: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "class": f"l_{self.i}",
            "i": self.i,
            "degree": self.degree,
            "in_stable_range": self.in_stable_range,
            "bott_obstruction": self.bott_obstruction,
        }


@dataclass(frozen=True)
class FirstObstruction:
    k: int
    i: int
    degree: int
    genus_threshold: int

    def to_dict(self) -> Dict[str, Any]:
        return {"k": self.k, "class": f"l_{self.i}", "degree": self.degree, "genus_threshold": self.genus_threshold}


@dataclass
class ObstructionReport:
    """Candidate l_i classes and the verdict for one manifold."""
    k: int
    signature: Signature
    stable_range: StableRange
    candidates: List[Candidate]
    verdict: str
    certificates: List[str] = field(default_factory=list)
    lattice_name: Optional[str] = None

    @property
    def obstructed(self) -> bool:
        return self.verdict == VERDICT_OBSTRUCTED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lattice": self.lattice_name,
            "k": self.k,
            "signature": [self.signature.positive, self.signature.negative],
            "stable_range": self.stable_range.to_dict(),
            "candidates": [c.to_dict() for c in self.candidates],
            "verdict": self.verdict,
            "certificates": self.certificates,
        }


@dataclass
class StabilizerReport:
    """Stabilizer data for an n-tuple of roots."""
    tuple_size: int
    span_signature: Signature
    ambient: Tuple[int, int]
    stable_range: StableRange
    odd_vanishing_upto: int
    finite_quotient_bound: int
    index_in_ambient: Any
    degenerate: bool
    sublattice: SublatticeReport

    @property
    def ambient_label(self) -> str:
        return f"SO+({self.ambient[0]},{self.ambient[1]})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tuple_size": self.tuple_size,
            "span_signature": [self.span_signature.positive, self.span_signature.negative],
            "ambient": self.ambient_label,
            "stable_range": self.stable_range.to_dict(),
            "odd_vanishing_upto": self.odd_vanishing_upto,
            "finite_quotient_bound": self.finite_quotient_bound,
            "index_in_ambient": self.index_in_ambient,
            "degenerate": self.degenerate,
        }


@dataclass
class RegionRow:
    n: int
    partition: Tuple[int, int]
    max_odd_degree: Optional[int]
    vanishing_upto: int
    ambient_bijective_upto: int
    ok: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "partition": list(self.partition),
            "max_odd_degree": self.max_odd_degree,
            "vanishing_upto": self.vanishing_upto,
            "ambient_bijective_upto": self.ambient_bijective_upto,
            "ok": self.ok,
        }


@dataclass
class RegionReport:
    max_total_degree: int
    rows: List[RegionRow]

    @property
    def all_ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_total_degree": self.max_total_degree,
            "all_ok": self.all_ok,
            "rows": [r.to_dict() for r in self.rows],
        }


# ---------------------------------------------------------------------------
# Thresholds
# ---------------------------------------------------------------------------

def borel_stable_range(p: int, q: int) -> StableRange:
    if p < 0 or q < 0:
        raise InvalidInput(f"signature entries must be >= 0, got ({p},{q})")
    if p + q < 2:
        raise RankTooSmall(f"stable range needs p + q >= 2, got {p + q}")
    half = (p + q) // 2
    bijective = half - 2
    return StableRange(
        p=p,
        q=q,
        bijective_upto=bijective,
        iso_upto_with_2q=min(2 * q, bijective),
        connectivity=2 * q + 1,
        root_type=f"{'D' if (p + q) % 2 == 0 else 'B'}_{half}",
    )


def bott_obstruction(i: int, k: int) -> bool:
    """l_i vanishes on flat bundles over a 4k-manifold iff i > k."""
    if i < 1 or k < 1:
        raise InvalidInput(f"i and k must be >= 1, got i={i}, k={k}")
    return i > k


def harer_genus_threshold(class_degree: int) -> int:
    """Smallest genus g with g/2 - 1 >= class_degree."""
    if class_degree < 1:
        raise InvalidInput(f"class degree must be >= 1, got {class_degree}")
    return 2 * (class_degree + 1)


def first_obstruction_class(k: int) -> FirstObstruction:
    """l_(k+1): the lowest class killed on flat bundles."""
    if k < 1:
        raise InvalidInput(f"k must be >= 1, got {k}")
    degree = 4 * (k + 1)
    return FirstObstruction(k=k, i=k + 1, degree=degree, genus_threshold=harer_genus_threshold(degree))


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def obstruction_report(
    l: Lattice,
    k: int,
    k3_summand: bool = False,
    surface_factors: Optional[Sequence[int]] = None,
) -> ObstructionReport:
    """Candidates i > k with 4i in the isomorphism range, plus a verdict."""
    if k < 1:
        raise InvalidInput(f"k must be >= 1, got {k}")
    if not l.is_nondegenerate:
        raise DegenerateForm(f"{l.label()} has determinant 0")

    sig = l.signature
    sr = borel_stable_range(sig.positive, sig.negative)
    limit = sr.iso_upto_with_2q
    candidates = [
        Candidate(i=i, degree=4 * i, in_stable_range=True, bott_obstruction=bott_obstruction(i, k))
        for i in range(k + 1, limit // 4 + 1)
    ]

    certificates = [STEP_FLAT_VANISHING, STEP_STABLE_RANGE]
    verdict = VERDICT_CANDIDATES

    if k3_summand:
        if k == 1:
            verdict = VERDICT_OBSTRUCTED
            certificates.append(STEP_K3_SUMMAND)
        else:
            logger.warning("K3 summand certifies l_2 only in dimension 4; ignored for k=%d", k)

    if surface_factors is not None:
        genera = list(surface_factors)
        if len(genera) % 2:
            raise OddArity(f"{len(genera)} surface factors")
        if len(genera) != 2 * k:
            raise InvalidInput(f"a 4k-manifold with k={k} is a product of {2 * k} surfaces, got {len(genera)}")
        threshold = first_obstruction_class(k).genus_threshold
        if genera and max(genera) >= threshold:
            verdict = VERDICT_OBSTRUCTED
            certificates.append(STEP_SURFACE_GENUS)

    if verdict != VERDICT_OBSTRUCTED:
        certificates.append(STEP_CONDITIONAL)

    logger.info("Obstruction report for %s, k=%d: %d candidates, %s", l.label(), k, len(candidates), verdict)
    return ObstructionReport(
        k=k,
        signature=sig,
        stable_range=sr,
        candidates=candidates,
        verdict=verdict,
        certificates=certificates,
        lattice_name=l.name,
    )


def stabilizer_report(l: Lattice, roots: Sequence[Sequence[int]]) -> StabilizerReport:
    """
    Stabilizer of a root tuple: the span P has signature (n1, n2), the
    pointwise stabilizer acts on P-perp of signature (p - n1, q - n2), and the
    permutation action on the tuple is bounded by n!.
    """
    if not roots:
        raise InvalidInput("at least one root is required")
    vectors = [tuple(v) for v in roots]
    for v in vectors:
        if len(v) != l.rank:
            raise InvalidInput(f"vector {list(v)} has length {len(v)}, lattice rank is {l.rank}")
        n = l.norm(v)
        if n != -2:
            raise NotARoot(f"{list(v)} has norm {n}", {"vector": list(v), "norm": n})
    if len(set(vectors)) != len(vectors):
        raise InvalidInput("roots in a tuple must be distinct")

    n = len(vectors)
    report = sublattice_report(l, vectors)
    sig = l.signature
    span = report.span_signature
    ambient = (sig.positive - span.positive, sig.negative - span.negative)
    if report.is_degenerate:
        logger.warning("Root tuple of size %d spans a degenerate sublattice", n)

    return StabilizerReport(
        tuple_size=n,
        span_signature=span,
        ambient=ambient,
        stable_range=borel_stable_range(*ambient),
        odd_vanishing_upto=(l.rank - n) // 2 - 2,
        finite_quotient_bound=math.factorial(n),
        index_in_ambient=report.index_in_ambient,
        degenerate=report.is_degenerate,
        sublattice=report,
    )


def e2_region_check(
    max_total_degree: int = MAX_REGION_DEGREE,
    tuple_sizes: Optional[Sequence[int]] = None,
    ambient: Optional[Lattice] = None,
) -> RegionReport:
    """
    For each tuple size n and split n1 + n2 = n, every odd degree p with
    p + 2n <= max_total_degree must lie in the vanishing range
    floor((rank - n)/2) - 2, so only even bidegrees survive in the region.
    """
    if max_total_degree < 0:
        raise InvalidInput(f"max_total_degree must be >= 0, got {max_total_degree}")
    if max_total_degree > MAX_REGION_DEGREE:
        raise RegionTooLarge(f"region checks are limited to total degree {MAX_REGION_DEGREE}")
    lattice = ambient or builtin_lattice("K3")
    sig = lattice.signature
    sizes = list(tuple_sizes) if tuple_sizes is not None else list(range(1, max_total_degree // 2 + 1))

    rows: List[RegionRow] = []
    for n in sizes:
        if n < 1:
            raise InvalidInput(f"tuple size must be >= 1, got {n}")
        vanishing = (lattice.rank - n) // 2 - 2
        budget = max_total_degree - 2 * n
        max_odd = budget if budget % 2 else budget - 1
        max_odd = max_odd if max_odd >= 1 else None
        for n1 in range(0, min(sig.positive, n) + 1):
            n2 = n - n1
            if n2 > sig.negative:
                continue
            sr = borel_stable_range(sig.positive - n1, sig.negative - n2)
            ok = (max_odd is None or max_odd <= vanishing) and sr.bijective_upto == vanishing
            rows.append(RegionRow(
                n=n,
                partition=(n1, n2),
                max_odd_degree=max_odd,
                vanishing_upto=vanishing,
                ambient_bijective_upto=sr.bijective_upto,
                ok=ok,
            ))

    return RegionReport(max_total_degree=max_total_degree, rows=rows)


__all__ = [
    "StableRange",
    "Candidate",
    "FirstObstruction",
    "ObstructionReport",
    "StabilizerReport",
    "RegionRow",
    "RegionReport",
    "VERDICT_OBSTRUCTED",
    "VERDICT_CANDIDATES",
    "borel_stable_range",
    "bott_obstruction",
    "harer_genus_threshold",
    "first_obstruction_class",
    "obstruction_report",
    "stabilizer_report",
    "e2_region_check",
]
