"""Genus calculus: power series, graded polynomials and the l classes."""

from .engine import (
    ell_from_ch,
    ell_product_of_surfaces,
    ell_relation_constant,
    fiber_integrate_surface,
    l_tilde_rank2,
    verify_bo3_relation,
)
from .graded import GradedPolynomial
from .series import FormalPowerSeries, l_tilde_series

__all__ = [
    "FormalPowerSeries",
    "GradedPolynomial",
    "l_tilde_series",
    "l_tilde_rank2",
    "fiber_integrate_surface",
    "verify_bo3_relation",
    "ell_from_ch",
    "ell_relation_constant",
    "ell_product_of_surfaces",
]
