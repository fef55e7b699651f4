"""Finite combinatorial 2-complexes: small-cancellation checks, the face metric,
walls and halfspaces, convex hulls, the nerve, and disc diagrams."""

from .complex import CellComplex, ComplexError, EdgePath, Subcomplex, load_complex, validate

__all__ = ["CellComplex", "ComplexError", "EdgePath", "Subcomplex", "load_complex", "validate"]
__version__ = "0.1.0"
