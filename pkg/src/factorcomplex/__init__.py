"""Finite models of common-basis and free-factor complexes.

Field model (subspaces of GF(q)^n), truncated free-group model (Stallings
graphs), dual graphs of sphere systems, and an exact homology engine.
"""
from .errors import CapExceeded, FactorComplexError, InvariantError
from .homology import HomologyReport, betti, chain_complex_of, homology_report
from .poset import Poset, PosetMap, SimplicialComplex, chain_poset, face_closure, order_complex

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "FactorComplexError",
    "InvariantError",
    "SimplicialComplex",
    "Poset",
    "PosetMap",
    "face_closure",
    "order_complex",
    "chain_poset",
    "chain_complex_of",
    "betti",
    "homology_report",
    "HomologyReport",
]
