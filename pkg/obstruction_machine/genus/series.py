"""
Truncated formal power series with exact rational coefficients.

Coefficients are indexed by the power of x and kept up to and including
`order`; every operation truncates to the smaller order of its operands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Tuple, Union

from ..core.errors import InvalidInput, NotUnit

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class FormalPowerSeries:
    coeffs: Tuple[Fraction, ...]
    order: int

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Scalar], order: int) -> FormalPowerSeries:
        values = [Fraction(c) for c in coeffs][: order + 1]
        values += [Fraction(0)] * (order + 1 - len(values))
        return cls(coeffs=tuple(values), order=order)

    @classmethod
    def constant(cls, value: Scalar, order: int) -> FormalPowerSeries:
        return cls.from_coeffs([value], order)

    @classmethod
    def x(cls, order: int) -> FormalPowerSeries:
        return cls.from_coeffs([0, 1], order)

    def coefficient(self, k: int) -> Fraction:
        if k < 0 or k > self.order:
            return Fraction(0)
        return self.coeffs[k]

    def truncate(self, order: int) -> FormalPowerSeries:
        return FormalPowerSeries.from_coeffs(self.coeffs, min(order, self.order))

    def _coerce(self, other: Any) -> FormalPowerSeries:
        if isinstance(other, FormalPowerSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return FormalPowerSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other: Any) -> FormalPowerSeries:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        return FormalPowerSeries.from_coeffs(
            [self.coefficient(k) + other.coefficient(k) for k in range(order + 1)], order
        )

    __radd__ = __add__

    def __neg__(self) -> FormalPowerSeries:
        return FormalPowerSeries(coeffs=tuple(-c for c in self.coeffs), order=self.order)

    def __sub__(self, other: Any) -> FormalPowerSeries:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: Any) -> FormalPowerSeries:
        return (-self) + other

    def __mul__(self, other: Any) -> FormalPowerSeries:
        if isinstance(other, (int, Fraction)):
            return FormalPowerSeries(coeffs=tuple(c * other for c in self.coeffs), order=self.order)
        if not isinstance(other, FormalPowerSeries):
            return NotImplemented
        order = min(self.order, other.order)
        out = [Fraction(0)] * (order + 1)
        for i in range(order + 1):
            a = self.coeffs[i]
            if not a:
                continue
            for j in range(order + 1 - i):
                if other.coeffs[j]:
                    out[i + j] += a * other.coeffs[j]
        return FormalPowerSeries(coeffs=tuple(out), order=order)

    __rmul__ = __mul__

    def reciprocal(self) -> FormalPowerSeries:
        """1/f by the recursive coefficient formula; needs f(0) != 0."""
        a0 = self.coeffs[0]
        if a0 == 0:
            raise NotUnit("series has zero constant term")
        out = [Fraction(0)] * (self.order + 1)
        out[0] = 1 / a0
        for n in range(1, self.order + 1):
            acc = sum((self.coeffs[k] * out[n - k] for k in range(1, n + 1)), Fraction(0))
            out[n] = -acc / a0
        return FormalPowerSeries(coeffs=tuple(out), order=self.order)

    def __truediv__(self, other: Any) -> FormalPowerSeries:
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * other.reciprocal()

    def shift_down(self, k: int) -> FormalPowerSeries:
        """f / x^k for a series whose first k coefficients vanish."""
        if any(self.coeffs[:k]):
            raise NotUnit(f"cannot divide by x^{k}: low coefficients are nonzero")
        return FormalPowerSeries.from_coeffs(self.coeffs[k:], self.order - k)

    def is_even(self) -> bool:
        return all(c == 0 for c in self.coeffs[1::2])

    def nonzero_terms(self) -> Dict[int, Fraction]:
        return {k: c for k, c in enumerate(self.coeffs) if c}

    def to_dict(self) -> Dict[str, Any]:
        return {"order": self.order, "coefficients": {str(k): c for k, c in enumerate(self.coeffs)}}


def _scaled_exponential_terms(scale: Fraction, order: int, parity: int) -> List[Fraction]:
    return [
        scale ** n / math.factorial(n) if n % 2 == parity else Fraction(0)
        for n in range(order + 1)
    ]


def cosh_series(order: int, scale: Scalar = 1) -> FormalPowerSeries:
    """cosh(scale * x)."""
    return FormalPowerSeries.from_coeffs(_scaled_exponential_terms(Fraction(scale), order, 0), order)


def sinh_series(order: int, scale: Scalar = 1) -> FormalPowerSeries:
    """sinh(scale * x)."""
    return FormalPowerSeries.from_coeffs(_scaled_exponential_terms(Fraction(scale), order, 1), order)


def tanh_half_series(order: int) -> FormalPowerSeries:
    """tanh(x/2) = sinh(x/2) / cosh(x/2)."""
    return sinh_series(order, Fraction(1, 2)) / cosh_series(order, Fraction(1, 2))


def l_tilde_series(order: int) -> FormalPowerSeries:
    """
    x / tanh(x/2) = cosh(x/2) / (sinh(x/2) / x), exact to x^order.

    sinh(x/2)/x starts at 1/2, so the reciprocal exists; the division by x
    consumes one order, hence the extra term computed up front.
    """
    if order < 0:
        raise InvalidInput(f"series order must be >= 0, got {order}")
    sinh_over_x = sinh_series(order + 1, Fraction(1, 2)).shift_down(1)
    return cosh_series(order, Fraction(1, 2)) * sinh_over_x.reciprocal()
