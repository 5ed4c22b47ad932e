"""Acceptance suite."""

from .engine import AcceptanceEngine, AcceptanceReport, run_acceptance

__all__ = ["AcceptanceEngine", "AcceptanceReport", "run_acceptance"]
