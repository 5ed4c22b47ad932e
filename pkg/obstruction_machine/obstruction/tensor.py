"""
Tensor Calculus for Connected Sums

The pinch map of an n-fold connected sum pulls l_i back to
sum_j 1 x ... x l_i x ... x 1 (l_i on slot j). A TensorClass is a polynomial
in slot-indexed generators "l_i@j", which is the tensor power of Q[l_1, ...]
written as one commutative ring; a monomial in it is a simple tensor.

The length of a simple tensor is the number of slots that carry a
non-scalar factor.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import sympy

from ..core.config import get_config
from ..core.errors import InvalidInput, ScaleExceeded
from ..genus.graded import GradedPolynomial, base_name, slot_of, to_fraction, to_rational

logger = logging.getLogger(__name__)

SlotMonomial = Tuple[Tuple[str, int], ...]
SimpleTensor = Tuple[SlotMonomial, ...]


def _symbol(i: int, slot: int) -> sympy.Symbol:
    return sympy.Symbol(f"l_{i}@{slot}")


def _class_index(name: str) -> int:
    base = base_name(name)
    if not base.startswith("l_"):
        raise InvalidInput(f"expected an l class, got {name}")
    return int(base[2:])


def _render_slot(monomial: SlotMonomial) -> str:
    if not monomial:
        return "1"
    return "*".join(name if p == 1 else f"{name}^{p}" for name, p in monomial)


class TensorClass:
    """Formal sum of simple tensors over `arity` slots."""

    def __init__(self, poly: sympy.Poly, arity: int):
        self.poly = poly
        self.arity = arity

    @classmethod
    def scalar(cls, value: Any, arity: int, classes: int = 1) -> "TensorClass":
        gens = [_symbol(i, j) for i in range(1, classes + 1) for j in range(1, arity + 1)]
        return cls(sympy.Poly(to_rational(value), *gens, domain="QQ"), arity)

    def __add__(self, other: "TensorClass") -> "TensorClass":
        self._check(other)
        return TensorClass(self.poly + other.poly, self.arity)

    def __mul__(self, other: Union["TensorClass", int, Fraction]) -> "TensorClass":
        if isinstance(other, TensorClass):
            self._check(other)
            return TensorClass(self.poly * other.poly, self.arity)
        return TensorClass(self.poly * to_rational(other), self.arity)

    __rmul__ = __mul__

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, TensorClass) or other.arity != self.arity:
            return False
        return sympy.expand(self.poly.as_expr() - other.poly.as_expr()) == 0

    def __hash__(self) -> int:
        return hash((self.arity, self.poly.as_expr()))

    def _check(self, other: "TensorClass") -> None:
        if other.arity != self.arity:
            raise InvalidInput(f"tensor arities differ: {self.arity} vs {other.arity}")

    def summands(self) -> List[Tuple[Fraction, SimpleTensor]]:
        """(coefficient, simple tensor) pairs in deterministic order."""
        names = [str(g) for g in self.poly.gens]
        out = []
        for exps, coeff in self.poly.terms():
            if coeff == 0:
                continue
            slots: List[List[Tuple[str, int]]] = [[] for _ in range(self.arity)]
            for name, e in zip(names, exps):
                if e:
                    slots[slot_of(name) - 1].append((base_name(name), e))
            tensor = tuple(tuple(sorted(s)) for s in slots)
            out.append((to_fraction(coeff), tensor))
        out.sort(key=lambda t: (-length(t[1]), t[1]))
        return out

    def max_length(self) -> int:
        return max((length(t) for _, t in self.summands()), default=0)

    def max_length_terms(self) -> List[Tuple[Fraction, SimpleTensor]]:
        terms = self.summands()
        top = max((length(t) for _, t in terms), default=0)
        return [(c, t) for c, t in terms if length(t) == top]

    def permute_slots(self, perm: Sequence[int]) -> "TensorClass":
        """Move the content of slot s (1-based) to slot perm[s-1]."""
        if sorted(perm) != list(range(1, self.arity + 1)):
            raise InvalidInput(f"{list(perm)} is not a permutation of 1..{self.arity}")
        mapping = {
            g: sympy.Symbol(f"{base_name(str(g))}@{perm[slot_of(str(g)) - 1]}") for g in self.poly.gens
        }
        expr = self.poly.as_expr().xreplace(mapping)
        return TensorClass(sympy.Poly(expr, *sorted(set(mapping.values()), key=str), domain="QQ"), self.arity)

    def __str__(self) -> str:
        parts = []
        for coeff, tensor in self.summands():
            body = " ⊗ ".join(_render_slot(s) for s in tensor)
            if coeff == 1:
                parts.append(body)
            else:
                c = str(coeff.numerator) if coeff.denominator == 1 else f"{coeff.numerator}/{coeff.denominator}"
                parts.append(f"{c}*({body})")
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__

    def to_dict(self) -> Dict[str, Any]:
        return {
            "arity": self.arity,
            "text": str(self),
            "summands": [
                {"coefficient": c, "slots": [_render_slot(s) for s in t], "length": length(t)}
                for c, t in self.summands()
            ],
        }


def length(tensor: SimpleTensor) -> int:
    return sum(1 for slot in tensor if slot)


def tensor_type(tensor: SimpleTensor) -> Tuple[SlotMonomial, ...]:
    """Sorted non-scalar slot contents; invariant under slot permutation."""
    return tuple(sorted(slot for slot in tensor if slot))


# ---------------------------------------------------------------------------
# l monomials
# ---------------------------------------------------------------------------

def ell_monomial(exponents: Union[Sequence[int], Dict[int, int]]) -> GradedPolynomial:
    """l_1^m_1 ... l_n^m_n from an exponent list or {i: m_i}."""
    items = exponents.items() if isinstance(exponents, dict) else enumerate(exponents, start=1)
    result = GradedPolynomial.constant(1)
    for i, m in items:
        if m < 0:
            raise InvalidInput(f"negative exponent for l_{i}")
        if m:
            result = result * GradedPolynomial.generator(f"l_{i}") ** m
    return result


def ell_product(indices: Sequence[int]) -> GradedPolynomial:
    """Product of l_i over a multiset of indices, e.g. [1, 1, 2] -> l_1^2 l_2."""
    result = GradedPolynomial.constant(1)
    for i in indices:
        if i < 1:
            raise InvalidInput(f"class index must be >= 1, got {i}")
        result = result * GradedPolynomial.generator(f"l_{i}")
    return result


def connected_sum_pullback(classes: Union[GradedPolynomial, Sequence[int]], n: int) -> TensorClass:
    """
    Pull an l-polynomial back along the pinch map of an n-fold connected sum.

    `classes` is a polynomial in l_i, or a multiset of indices read as the
    product of those l_i.
    """
    if n < 1:
        raise InvalidInput(f"n must be >= 1, got {n}")
    poly = classes if isinstance(classes, GradedPolynomial) else ell_product(classes)

    indices = sorted({_class_index(g) for g in poly.generators}) or [1]
    top = max(indices)
    gens = [_symbol(i, j) for i in range(1, top + 1) for j in range(1, n + 1)]
    expanded = {i: sympy.Poly(sum(_symbol(i, j) for j in range(1, n + 1)), *gens, domain="QQ") for i in indices}

    total = sympy.Poly(0, *gens, domain="QQ")
    for monomial, coeff in poly.terms():
        term = sympy.Poly(to_rational(coeff), *gens, domain="QQ")
        for name, power in monomial:
            term = term * expanded[_class_index(name)] ** power
        total = total + term
    return TensorClass(total, n)


# ---------------------------------------------------------------------------
# Independence
# ---------------------------------------------------------------------------

@dataclass
class CertificateEntry:
    exponents: Tuple[int, ...]
    max_length: int
    term_count: int
    signature: Tuple[SlotMonomial, ...]

    def monomial_text(self) -> str:
        return str(ell_monomial(self.exponents))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "monomial": self.monomial_text(),
            "max_length": self.max_length,
            "max_length_terms": self.term_count,
            "signature": [_render_slot(s) for s in self.signature] or ["∅"],
        }


@dataclass
class IndependenceCertificate:
    n: int
    N: int
    independent: bool
    entries: List[CertificateEntry]
    collisions: List[Tuple[str, str]]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "N": self.N,
            "independent": self.independent,
            "monomials": len(self.entries),
            "certificate": [e.to_dict() for e in self.entries],
            "collisions": [list(c) for c in self.collisions],
        }


def monomial_exponents(n: int, N: int) -> List[Tuple[int, ...]]:
    """All (m_1..m_n) with sum <= N, ordered by total degree then lexicographically."""
    exps = [e for e in itertools.product(range(N + 1), repeat=n) if sum(e) <= N]
    return sorted(set(exps), key=lambda e: (sum(e), tuple(-x for x in e)))


def independence_certificate(
    n: int,
    N: int,
    monomials: Optional[Sequence[Sequence[int]]] = None,
) -> IndependenceCertificate:
    """
    Check that monomials in l_1..l_n of total degree <= N have pairwise
    distinct sets of maximal-length terms after pulling back to N slots.

    The maximal-length terms of l_1^m_1 ... l_n^m_n are the slot permutations
    of a tensor with m_i slots holding l_i; distinct exponent vectors give
    distinct signatures. An explicit `monomials` list is deduplicated first.
    """
    bounds = get_config().independence
    if n < 1 or N < 1:
        raise InvalidInput(f"n and N must be >= 1, got n={n}, N={N}")
    if n > bounds.max_classes or N > bounds.max_total:
        raise ScaleExceeded(
            f"independence certificate limited to n <= {bounds.max_classes}, N <= {bounds.max_total}",
            {"n": n, "N": N},
        )

    if monomials is None:
        exponent_list = monomial_exponents(n, N)
    else:
        exponent_list = []
        for m in monomials:
            e = tuple(m) + (0,) * (n - len(m))
            if len(e) != n or sum(e) > N or any(x < 0 for x in e):
                raise InvalidInput(f"monomial exponents {list(m)} outside n={n}, N={N}")
            if e not in exponent_list:
                exponent_list.append(e)

    entries: List[CertificateEntry] = []
    seen: Dict[Any, Tuple[int, ...]] = {}
    collisions: List[Tuple[str, str]] = []
    for exps in exponent_list:
        pulled = connected_sum_pullback(ell_monomial(exps), N)
        top = pulled.max_length_terms()
        types = {tensor_type(t) for _, t in top}
        if len(types) > 1:
            logger.warning("Maximal terms of %s have mixed types", exps)
        key = frozenset(t for _, t in top)
        signature = min(types) if types else ()
        entry = CertificateEntry(
            exponents=exps, max_length=pulled.max_length(), term_count=len(top), signature=signature
        )
        entries.append(entry)
        if key in seen:
            collisions.append((str(ell_monomial(seen[key])), entry.monomial_text()))
        else:
            seen[key] = exps

    logger.info("Independence certificate n=%d N=%d: %d monomials, %d collisions", n, N, len(entries), len(collisions))
    return IndependenceCertificate(n=n, N=N, independent=not collisions, entries=entries, collisions=collisions)


__all__ = [
    "TensorClass",
    "length",
    "tensor_type",
    "ell_monomial",
    "ell_product",
    "connected_sum_pullback",
    "CertificateEntry",
    "IndependenceCertificate",
    "monomial_exponents",
    "independence_certificate",
]
