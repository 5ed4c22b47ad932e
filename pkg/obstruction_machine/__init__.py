"""
Obstruction Machine
===================

Exact computations behind Nielsen-realization obstructions for 4k-manifolds.

Components:
- Lattice core (Gram matrices, signatures, vector enumeration, sublattices)
- Isometries (reflections, spinor norm, subgroup classification)
- Genus calculus (x/tanh(x/2), Chern character, l classes, surface bundles)
- Obstruction engine (stable ranges, connected sums, reports, stabilizers)
- Arrangement homology (Betti numbers of codimension-3 arrangements)
- Acceptance suite (one-shot reproduction of every check)
"""

__version__ = "1.0.0"

from .core.errors import ObstructionMachineError
from .core.lattice import Lattice, builtin_lattice, resolve_lattice
from .core.isometry import Isometry, SubgroupTag, classify
from .obstruction.engine import ObstructionReport, obstruction_report

__all__ = [
    "ObstructionMachineError",
    "Lattice",
    "builtin_lattice",
    "resolve_lattice",
    "Isometry",
    "SubgroupTag",
    "classify",
    "ObstructionReport",
    "obstruction_report",
]
