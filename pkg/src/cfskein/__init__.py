"""Quantum tori, quantum traces and representations for triangulated surfaces."""

from .coeff import LaurentScalar, RootOfUnityContext
from .curves import CombinatorialCurve, intersection_form, load_curves
from .qtorus import SkewLattice, TorusElement, cf_algebra, parse_expression
from .qtrace import quantum_trace
from .surface import TriangulatedSurface, build_cover, load_surface

__version__ = "0.1.0"

__all__ = [
    "LaurentScalar", "RootOfUnityContext", "CombinatorialCurve", "intersection_form",
    "load_curves", "SkewLattice", "TorusElement", "cf_algebra", "parse_expression",
    "quantum_trace", "TriangulatedSurface", "build_cover", "load_surface",
]
