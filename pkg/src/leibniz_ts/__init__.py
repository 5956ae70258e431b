"""Exact computations for Leibniz triple systems: identities, representations,
cohomology, central and T*-extensions, quadratic and symplectic structures,
and truncated formal deformations."""
from .core import AxiomError, TripleSystem, verify_axioms
from .linalg import GF, Matrix, QQ, Subspace

__all__ = ["AxiomError", "GF", "Matrix", "QQ", "Subspace", "TripleSystem", "verify_axioms"]
__version__ = "0.1.0"
