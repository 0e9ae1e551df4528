"""Power diagrams, coherent triangulations and their discrete Morse theory.

Geometry is exact over ``fractions.Fraction``; only the curve envelopes in
:mod:`powdiag.tropic` and the numerical oracles use floating point.
"""

from .core import AffineFunctionSet, Hyperplane, SiteSet, to_affine
from .diagram import PowerDiagram, build_power_diagram
from .dmt import DiscreteMorseFunction, DiscreteVectorField, build_dvf
from .errors import DegenerateError, DimensionError, DisappearingVertexError, PowDiagError
from .hull import PolyhedralComplex, coherent_triangulation, disappearing_vertices
from .korder import build_korder
from .morse import morse_poset

__all__ = [
    "AffineFunctionSet", "DegenerateError", "DimensionError", "DisappearingVertexError",
    "DiscreteMorseFunction", "DiscreteVectorField", "Hyperplane", "PolyhedralComplex",
    "PowDiagError", "PowerDiagram", "SiteSet", "build_dvf", "build_korder",
    "build_power_diagram", "coherent_triangulation", "disappearing_vertices",
    "morse_poset", "to_affine",
]
