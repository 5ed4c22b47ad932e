"""Obstruction engine: stable ranges, connected sums, reports and stabilizers."""

from .engine import (
    ObstructionReport,
    StableRange,
    borel_stable_range,
    e2_region_check,
    obstruction_report,
    stabilizer_report,
)
from .tensor import TensorClass, connected_sum_pullback, independence_certificate

__all__ = [
    "ObstructionReport",
    "StableRange",
    "borel_stable_range",
    "e2_region_check",
    "obstruction_report",
    "stabilizer_report",
    "TensorClass",
    "connected_sum_pullback",
    "independence_certificate",
]
