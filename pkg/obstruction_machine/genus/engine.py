"""
Genus Calculus Engine

Characteristic-class bookkeeping for the l_i classes:

- L~ is the multiplicative genus with defining series x / tanh(x/2); on a
  rank-2 oriented bundle its degree-4j part is c_j * e^(2j).
- ch of a real rank-3 bundle is 1 + 2cosh(x) with x^2 = p1, so
  ch_4 = p1, ch_8 = p1^2/12, ch_12 = p1^3/360.
- l_i = 2 ch_4i as a polynomial in p1.
- Surface bundles integrate e^(m+1) to kappa_m along the fiber.

All arithmetic is exact (Fraction series, sympy rationals).
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from ..core.errors import InvalidInput, OddArity, UnsupportedRank
from .graded import GradedPolynomial, Monomial, base_name, slot_of
from .series import FormalPowerSeries, cosh_series, l_tilde_series, tanh_half_series

logger = logging.getLogger(__name__)

PUBLISHED_ELL_CONSTANT = 12


@dataclass
class RelationCheck:
    """lhs and rhs of an identity in Q[p1], with their exact comparison."""
    name: str
    lhs: GradedPolynomial
    rhs: GradedPolynomial
    equal: bool
    ratio: Optional[Fraction] = None

    def to_dict(self) -> Dict[str, Any]:
        data = {"relation": self.name, "lhs": str(self.lhs), "rhs": str(self.rhs), "equal": self.equal}
        if self.ratio is not None:
            data["ratio"] = self.ratio
        return data


@dataclass
class EllConstant:
    computed: Fraction
    published: int = PUBLISHED_ELL_CONSTANT

    @property
    def discrepancy(self) -> bool:
        return self.computed != self.published

    def to_dict(self) -> Dict[str, Any]:
        return {
            "relation": "l_1^2 = c * l_2",
            "computed": self.computed,
            "published": self.published,
            "discrepancy": self.discrepancy,
        }


@dataclass(frozen=True)
class SlotTerm:
    """One summand of the product expansion: L~_{a_j} on slot j."""
    pattern: Tuple[int, ...]
    coefficient: Fraction

    @property
    def kappa_slots(self) -> Tuple[str, ...]:
        return tuple("1" if a == 0 else f"kappa_{2 * a - 1}" for a in self.pattern)

    @property
    def euler_degree(self) -> int:
        return 4 * sum(self.pattern)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pattern": list(self.pattern),
            "slots": " x ".join(self.kappa_slots),
            "coefficient": self.coefficient,
        }


@dataclass
class SurfaceProductExpansion:
    """l_i of a product of 2k surface bundles, in both slot and kappa form."""
    genera: List[int]
    i: int
    k: int
    slot_terms: List[SlotTerm]
    euler_form: GradedPolynomial
    kappa_form: GradedPolynomial
    stable_upto: int

    def term(self, pattern: Sequence[int]) -> Fraction:
        key = tuple(pattern)
        return next((t.coefficient for t in self.slot_terms if t.pattern == key), Fraction(0))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "genera": self.genera,
            "i": self.i,
            "k": self.k,
            "euler_degree": 4 * (self.i + self.k),
            "kappa_degree": 4 * self.i,
            "slot_terms": [t.to_dict() for t in self.slot_terms],
            "euler_form": self.euler_form.to_dict(),
            "kappa_form": self.kappa_form.to_dict(),
            "harer_stable_upto": self.stable_upto,
        }


# ---------------------------------------------------------------------------
# Series
# ---------------------------------------------------------------------------

def l_tilde_coefficient(j: int) -> Fraction:
    """Coefficient of x^(2j) in x / tanh(x/2)."""
    return l_tilde_series(2 * j).coefficient(2 * j)


def series_inverse_check(order: int) -> bool:
    """l_tilde_series(order) * tanh(x/2) == x up to x^order."""
    if order < 0:
        raise InvalidInput(f"series order must be >= 0, got {order}")
    product = l_tilde_series(order) * tanh_half_series(order)
    return product == FormalPowerSeries.x(order)


def l_tilde_rank2(j: int) -> GradedPolynomial:
    """Degree-4j part of L~ for an oriented rank-2 bundle: c_j * e^(2j)."""
    if j < 0:
        raise InvalidInput(f"j must be >= 0, got {j}")
    return GradedPolynomial.constant(l_tilde_coefficient(j)) * GradedPolynomial.generator("e") ** (2 * j)


# ---------------------------------------------------------------------------
# Fiber integration
# ---------------------------------------------------------------------------

def _integrate_power(power: int) -> Optional[str]:
    """e^power along a surface fiber; None means it integrates to 0."""
    if power == 0:
        return None
    return f"kappa_{power - 1}"


def fiber_integrate_surface(poly: GradedPolynomial) -> GradedPolynomial:
    """Linear map e^(m+1) -> kappa_m, e -> kappa_0, constants -> 0."""
    extra = [g for g in poly.generators if g != "e"]
    if extra:
        raise InvalidInput(f"fiber integration expects a polynomial in e only, found {extra}")

    def integrate(monomial: Monomial, coeff: Fraction):
        power = dict(monomial).get("e", 0)
        target = _integrate_power(power)
        return None if target is None else (((target, 1),), coeff)

    return poly.map_terms(integrate)


def substitute_kappa0(poly: GradedPolynomial, genus: Union[int, Sequence[int]]) -> GradedPolynomial:
    """
    kappa_0 = 2 - 2g. A sequence of genera substitutes slot-indexed kappa_0@j
    with the genus of slot j (1-based).
    """
    values: Dict[str, int] = {}
    for name in poly.generators:
        if base_name(name) != "kappa_0":
            continue
        slot = slot_of(name)
        if isinstance(genus, int):
            g = genus
        elif slot is not None and 1 <= slot <= len(genus):
            g = genus[slot - 1]
        else:
            raise InvalidInput(f"no genus supplied for {name}")
        values[name] = 2 - 2 * g
    return poly.substitute(values)


# ---------------------------------------------------------------------------
# Chern character and l classes
# ---------------------------------------------------------------------------

def chern_character_real(rank: int, max_degree: int) -> GradedPolynomial:
    """
    Total Chern character of a real bundle of rank 1, 2 or 3 in H*(BO_p; Q),
    truncated at cohomological degree max_degree. With x^2 = p1:
    rank 1 -> 1, rank 2 -> 2cosh(x), rank 3 -> 1 + 2cosh(x).
    """
    if rank > 3 or rank < 1:
        raise UnsupportedRank(f"Chern character implemented for ranks 1..3, got {rank}")
    if max_degree < 0 or max_degree % 2:
        raise InvalidInput(f"max_degree must be even and >= 0, got {max_degree}")

    if rank == 1:
        return GradedPolynomial.constant(1)

    top = max_degree // 4
    cosh = cosh_series(2 * top)
    p1 = GradedPolynomial.generator("p1")
    total = GradedPolynomial.constant(1 if rank == 3 else 0)
    for j in range(top + 1):
        total = total + GradedPolynomial.constant(2 * cosh.coefficient(2 * j)) * p1 ** j
    return total


def ch_component(degree: int, rank: int = 3) -> GradedPolynomial:
    return chern_character_real(rank, degree).component(degree)


def verify_bo3_relation() -> RelationCheck:
    """ch_4^2 against 12 ch_8 in Q[p1]."""
    ch4 = ch_component(4)
    ch8 = ch_component(8)
    lhs = ch4 ** 2
    rhs = ch8 * 12
    return RelationCheck(name="ch_4^2 = 12 ch_8", lhs=lhs, rhs=rhs, equal=(lhs == rhs))


def _ratio(lhs: GradedPolynomial, rhs: GradedPolynomial) -> Optional[Fraction]:
    """lhs / rhs for two scalar multiples of the same monomial."""
    lt, rt = lhs.terms(), rhs.terms()
    if len(lt) != 1 or len(rt) != 1 or lt[0][0] != rt[0][0]:
        return None
    return lt[0][1] / rt[0][1]


def verify_degree12_relation() -> RelationCheck:
    """ch_4 * ch_8 against ch_12; the ratio is reported, not asserted."""
    lhs = ch_component(4) * ch_component(8)
    rhs = ch_component(12)
    return RelationCheck(name="ch_4 ch_8 vs ch_12", lhs=lhs, rhs=rhs, equal=(lhs == rhs), ratio=_ratio(lhs, rhs))


def ell_from_ch(i: int) -> GradedPolynomial:
    """l_i = 2 ch_4i for a rank-3 bundle."""
    if i < 1:
        raise InvalidInput(f"i must be >= 1, got {i}")
    return ch_component(4 * i) * 2


def ell_relation_constant() -> EllConstant:
    """c with l_1^2 = c l_2."""
    c = _ratio(ell_from_ch(1) ** 2, ell_from_ch(2))
    result = EllConstant(computed=c)
    if result.discrepancy:
        logger.info("l_1^2 = %s l_2 (published constant %d)", c, result.published)
    return result


# ---------------------------------------------------------------------------
# Products of surfaces
# ---------------------------------------------------------------------------

def _compositions(total: int, parts: int):
    """Ordered tuples of `parts` nonnegative integers summing to `total`."""
    for cuts in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for c in cuts:
            out.append(c - prev - 1)
            prev = c
        out.append(total + parts - 1 - prev - 1)
        yield tuple(out)


def ell_product_of_surfaces(genera: Sequence[int], i: int) -> SurfaceProductExpansion:
    """
    l_i for a product of 2k surface bundles.

    The vertical tangent bundle splits into the 2k fiber tangent bundles, so
    L~_{i+k} is the sum over patterns (a_1..a_2k) with sum i + k of
    prod c_{a_j} e_j^(2 a_j). The slot terms keep every pattern, with L~_0
    slots carrying the scalar 2. Integrating slotwise sends e_j^(2a) to
    kappa_(2a-1) on slot j and kills slots with a = 0.
    """
    genera = list(genera)
    if len(genera) % 2:
        raise OddArity(f"{len(genera)} surface factors; a product of dimension 4k needs 2k")
    if not genera:
        raise InvalidInput("at least two surface factors are required")
    if i < 1:
        raise InvalidInput(f"i must be >= 1, got {i}")
    if any(g < 0 for g in genera):
        raise InvalidInput("genera must be nonnegative")

    k = len(genera) // 2
    slots = len(genera)
    coeffs = {a: l_tilde_coefficient(a) for a in range(i + k + 1)}

    slot_terms: List[SlotTerm] = []
    euler_terms: Dict[Monomial, Fraction] = {}
    kappa_terms: Dict[Monomial, Fraction] = {}
    for pattern in sorted(_compositions(i + k, slots), reverse=True):
        coefficient = math.prod((coeffs[a] for a in pattern), start=Fraction(1))
        if coefficient == 0:
            continue
        slot_terms.append(SlotTerm(pattern=pattern, coefficient=coefficient))
        euler = tuple((f"e@{j + 1}", 2 * a) for j, a in enumerate(pattern) if a)
        euler_terms[tuple(sorted(euler))] = coefficient
        if all(a > 0 for a in pattern):
            kappa = tuple((f"kappa_{2 * a - 1}@{j + 1}", 1) for j, a in enumerate(pattern))
            kappa_terms[tuple(sorted(kappa))] = kappa_terms.get(tuple(sorted(kappa)), Fraction(0)) + coefficient

    logger.debug("Surface product k=%d, i=%d: %d slot terms", k, i, len(slot_terms))
    return SurfaceProductExpansion(
        genera=genera,
        i=i,
        k=k,
        slot_terms=slot_terms,
        euler_form=GradedPolynomial.from_terms(euler_terms),
        kappa_form=GradedPolynomial.from_terms(kappa_terms),
        stable_upto=max(genera) // 2 - 1,
    )


__all__ = [
    "RelationCheck",
    "EllConstant",
    "SlotTerm",
    "SurfaceProductExpansion",
    "PUBLISHED_ELL_CONSTANT",
    "l_tilde_series",
    "l_tilde_coefficient",
    "series_inverse_check",
    "l_tilde_rank2",
    "fiber_integrate_surface",
    "substitute_kappa0",
    "chern_character_real",
    "ch_component",
    "verify_bo3_relation",
    "verify_degree12_relation",
    "ell_from_ch",
    "ell_relation_constant",
    "ell_product_of_surfaces",
]
