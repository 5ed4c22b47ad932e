"""Arrangement homology for the root-arrangement model."""

from .engine import Arrangement, BettiTable, betti_complement, k3_arrangement_from_roots, transversality_check

__all__ = ["Arrangement", "BettiTable", "betti_complement", "k3_arrangement_from_roots", "transversality_check"]
