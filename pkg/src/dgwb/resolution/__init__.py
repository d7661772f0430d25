"""Simplicial objects, matching/latching objects and the functorial resolution."""

from .resolve import Resolution, induced_maps, naturality_failures, resolve
from .simplicial import SimplicialDgAlgebra, check_simplicial_identities, constant_simplicial

__all__ = ["Resolution", "SimplicialDgAlgebra", "check_simplicial_identities", "constant_simplicial",
           "induced_maps", "naturality_failures", "resolve"]
