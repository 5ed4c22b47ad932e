"""
Graded polynomials with exact rational coefficients.

A GradedPolynomial is a sympy expression in named generators together with
the degree of each generator (e: 2, p1: 4, kappa_m: 2m, ch_j: j, l_i: 4i).
Slot-indexed generators such as "kappa_3@1" carry the degree of their base
name and are used for external products.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

import sympy

Monomial = Tuple[Tuple[str, int], ...]
Scalar = Union[int, Fraction, sympy.Rational]


def to_rational(value: Scalar) -> sympy.Rational:
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    return sympy.Rational(value)


def to_fraction(value: Any) -> Fraction:
    r = sympy.Rational(value)
    return Fraction(int(r.p), int(r.q))


def base_name(name: str) -> str:
    return name.split("@", 1)[0]


def slot_of(name: str) -> Optional[int]:
    return int(name.split("@", 1)[1]) if "@" in name else None


def generator_degree(name: str) -> int:
    """Degree implied by the generator's base name."""
    base = base_name(name)
    if base == "e":
        return 2
    if base == "p1":
        return 4
    if base.startswith("kappa_"):
        return 2 * int(base[len("kappa_"):])
    if base.startswith("ch_"):
        return int(base[len("ch_"):])
    if base.startswith("l_"):
        return 4 * int(base[len("l_"):])
    raise ValueError(f"unknown generator: {name}")


class GradedPolynomial:
    """Exact polynomial in graded generators."""

    def __init__(self, expr: Any = 0, degrees: Optional[Mapping[str, int]] = None):
        self.expr = sympy.expand(sympy.sympify(expr))
        names = sorted(str(s) for s in self.expr.free_symbols)
        given = dict(degrees or {})
        self.degrees: Dict[str, int] = {n: given.get(n, None) or generator_degree(n) for n in names}

    # -- construction -------------------------------------------------------

    @classmethod
    def generator(cls, name: str, degree: Optional[int] = None) -> GradedPolynomial:
        return cls(sympy.Symbol(name), {name: degree if degree is not None else generator_degree(name)})

    @classmethod
    def constant(cls, value: Scalar) -> GradedPolynomial:
        return cls(to_rational(value))

    @classmethod
    def from_terms(cls, terms: Mapping[Monomial, Scalar]) -> GradedPolynomial:
        expr = sympy.Integer(0)
        for monomial, coeff in terms.items():
            term = to_rational(coeff)
            for name, power in monomial:
                term *= sympy.Symbol(name) ** power
            expr += term
        return cls(expr)

    # -- arithmetic ---------------------------------------------------------

    def _merge(self, other: GradedPolynomial) -> Dict[str, int]:
        merged = dict(self.degrees)
        merged.update(other.degrees)
        return merged

    def _coerce(self, other: Any) -> GradedPolynomial:
        if isinstance(other, GradedPolynomial):
            return other
        return GradedPolynomial.constant(other)

    def __add__(self, other: Any) -> GradedPolynomial:
        other = self._coerce(other)
        return GradedPolynomial(self.expr + other.expr, self._merge(other))

    __radd__ = __add__

    def __neg__(self) -> GradedPolynomial:
        return GradedPolynomial(-self.expr, self.degrees)

    def __sub__(self, other: Any) -> GradedPolynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> GradedPolynomial:
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> GradedPolynomial:
        other = self._coerce(other)
        return GradedPolynomial(self.expr * other.expr, self._merge(other))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> GradedPolynomial:
        return GradedPolynomial(self.expr ** k, self.degrees)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, GradedPolynomial):
            other = GradedPolynomial.constant(other)
        return sympy.expand(self.expr - other.expr) == 0

    def __hash__(self) -> int:
        return hash(self.expr)

    # -- inspection ---------------------------------------------------------

    @property
    def generators(self) -> List[str]:
        return sorted(self.degrees)

    def is_zero(self) -> bool:
        return self.expr == 0

    def terms(self) -> List[Tuple[Monomial, Fraction]]:
        """(monomial, coefficient) pairs sorted by degree, then by monomial."""
        gens = self.generators
        if not gens:
            return [((), to_fraction(self.expr))] if self.expr != 0 else []
        poly = sympy.Poly(self.expr, *[sympy.Symbol(g) for g in gens], domain="QQ")
        out = []
        for exps, coeff in poly.terms():
            monomial = tuple((g, e) for g, e in zip(gens, exps) if e)
            out.append((monomial, to_fraction(coeff)))
        out.sort(key=lambda t: (self.monomial_degree(t[0]), t[0]))
        return out

    def monomial_degree(self, monomial: Monomial) -> int:
        return sum(self.degrees.get(name, generator_degree(name)) * power for name, power in monomial)

    def degrees_present(self) -> List[int]:
        return sorted({self.monomial_degree(m) for m, _ in self.terms()})

    def is_homogeneous(self) -> bool:
        return len(self.degrees_present()) <= 1

    def component(self, degree: int) -> GradedPolynomial:
        return GradedPolynomial.from_terms(
            {m: c for m, c in self.terms() if self.monomial_degree(m) == degree}
        )

    def coefficient(self, monomial: Monomial) -> Fraction:
        key = tuple(sorted(monomial))
        for m, c in self.terms():
            if m == key:
                return c
        return Fraction(0)

    def map_terms(self, fn: Callable[[Monomial, Fraction], Optional[Tuple[Monomial, Fraction]]]) -> GradedPolynomial:
        """Linear extension of a per-term map; returning None drops the term."""
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.terms():
            mapped = fn(m, c)
            if mapped is None:
                continue
            key = tuple(sorted(mapped[0]))
            out[key] = out.get(key, Fraction(0)) + mapped[1]
        return GradedPolynomial.from_terms({k: v for k, v in out.items() if v})

    def substitute(self, values: Mapping[str, Scalar]) -> GradedPolynomial:
        subs = {sympy.Symbol(k): to_rational(v) for k, v in values.items()}
        return GradedPolynomial(self.expr.subs(subs), self.degrees)

    # -- rendering ----------------------------------------------------------

    def __str__(self) -> str:
        parts = []
        for monomial, coeff in self.terms():
            c = str(coeff.numerator) if coeff.denominator == 1 else f"{coeff.numerator}/{coeff.denominator}"
            if not monomial:
                parts.append(c)
                continue
            body = "*".join(name if power == 1 else f"{name}^{power}" for name, power in monomial)
            parts.append(body if coeff == 1 else f"-{body}" if coeff == -1 else f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    __repr__ = __str__

    def to_dict(self) -> Dict[str, Any]:
        return {
            "text": str(self),
            "terms": [
                {"monomial": {name: power for name, power in m}, "degree": self.monomial_degree(m), "coefficient": c}
                for m, c in self.terms()
            ],
        }
