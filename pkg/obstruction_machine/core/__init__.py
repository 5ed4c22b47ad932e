"""Obstruction Machine Core Components"""

from .config import MachineConfig, get_config, load_config, set_config
from .errors import ObstructionMachineError
from .isometry import Isometry, IsometryClass, SubgroupTag, classify, reflection, spinor_norm
from .lattice import Lattice, Signature, SublatticeReport, builtin_lattice, enumerate_vectors, resolve_lattice

__all__ = [
    "MachineConfig",
    "get_config",
    "load_config",
    "set_config",
    "ObstructionMachineError",
    "Isometry",
    "IsometryClass",
    "SubgroupTag",
    "classify",
    "reflection",
    "spinor_norm",
    "Lattice",
    "Signature",
    "SublatticeReport",
    "builtin_lattice",
    "enumerate_vectors",
    "resolve_lattice",
]
