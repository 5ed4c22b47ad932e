"""
Obstruction Machine Errors

Every domain failure raised by an engine derives from ObstructionMachineError.
The `name` attribute is stable: the CLI prints it verbatim and the exit-code
contract keys off the base class.
"""

from typing import Any, Dict, Optional


class ObstructionMachineError(Exception):
    """Base class for all domain errors."""

    name = "ObstructionMachineError"

    def __init__(self, message: str = "", details: Optional[Dict[str, Any]] = None):
        super().__init__(message or self.name)
        self.message = message or self.name
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"error": self.name, "message": self.message}
        if self.details:
            data["details"] = self.details
        return data


def _named(name: str, doc: str) -> type:
    return type(name, (ObstructionMachineError,), {"name": name, "__doc__": doc})


# lattice-core
NonSymmetric = _named("NonSymmetric", "Gram matrix is not square and symmetric.")
BoxRequired = _named("BoxRequired", "Indefinite enumeration needs an explicit coordinate box.")
EmptyInput = _named("EmptyInput", "An operation received an empty vector list.")
UnknownLattice = _named("UnknownLattice", "A lattice name could not be resolved.")
DegenerateForm = _named("DegenerateForm", "The Gram matrix is singular.")

# isometry
IsotropicVector = _named("IsotropicVector", "Reflection through a vector of norm 0.")
NotIntegral = _named("NotIntegral", "A reflection matrix has a non-integer entry.")
LatticeMismatch = _named("LatticeMismatch", "Isometries live on different lattices.")
NotAnIsometry = _named("NotAnIsometry", "Matrix does not preserve the Gram form.")

# genus-calculus
UnsupportedRank = _named("UnsupportedRank", "Chern character requested for rank > 3.")
OddArity = _named("OddArity", "A product of surfaces needs an even number of factors.")
NotUnit = _named("NotUnit", "Series reciprocal needs a nonzero constant term.")

# obstruction-engine
RankTooSmall = _named("RankTooSmall", "Stable range needs p + q >= 2.")
ScaleExceeded = _named("ScaleExceeded", "Request exceeds the configured desk-scale bounds.")
NotARoot = _named("NotARoot", "Vector does not have norm -2.")
RegionTooLarge = _named("RegionTooLarge", "Spectral-sequence region exceeds total degree 9.")

# arrangement-homology
TransversalityFailure = _named("TransversalityFailure", "Subspaces are not transversal.")
EvenAmbient = _named("EvenAmbient", "Ambient dimension must be odd.")
ProportionalRoots = _named("ProportionalRoots", "Two roots span the same line.")

# plumbing
InvalidInput = _named("InvalidInput", "Malformed input document or argument.")
InternalInconsistency = _named("InternalInconsistency", "An algorithm invariant was violated.")


__all__ = [
    "ObstructionMachineError",
    "NonSymmetric",
    "BoxRequired",
    "EmptyInput",
    "UnknownLattice",
    "DegenerateForm",
    "IsotropicVector",
    "NotIntegral",
    "LatticeMismatch",
    "NotAnIsometry",
    "UnsupportedRank",
    "OddArity",
    "NotUnit",
    "RankTooSmall",
    "ScaleExceeded",
    "NotARoot",
    "RegionTooLarge",
    "TransversalityFailure",
    "EvenAmbient",
    "ProportionalRoots",
    "InvalidInput",
    "InternalInconsistency",
]
