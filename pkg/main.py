#!/usr/bin/env python3
"""
Obstruction Machine - Main Entry Point

Usage:
    python main.py lattice K3 --signature          # (3,19)
    python main.py roots E8                        # 240 roots
    python main.py isometry --reflect 1,1 --lattice H
    python main.py genus --order 8 --relations     # x/tanh(x/2), ch relations
    python main.py ell 2 --genera 18,2             # l_2 of a product of surfaces
    python main.py sum l_1^2 3                     # pull back to a 3-fold connected sum
    python main.py independence 2 3
    python main.py range 3 19                      # bijective_upto: 9
    python main.py stabilizer --roots 2
    python main.py betti --roots 3 --max-degree 6
    python main.py report K3 --k 1 --k3-summand    # section obstructed
    python main.py reproduce                       # acceptance suite

Common flags: --json, --cite, --verbose, --config PATH
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from obstruction_machine.cli import run


if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
