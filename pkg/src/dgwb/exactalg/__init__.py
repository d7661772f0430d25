"""Exact commutative algebra over ℚ: polynomials, Gröbner bases, syzygies."""

from .base import BaseRing, polynomial_ring
from .groebner import divide, groebner_basis, normal_form
from .modules import (InvariantError, ModulePresentation, lift, module_subquotient,
                      syzygies, unit_ideal_certificate)
from .parse import ParseError, parse_rational
from .polynomial import ContextError, MonomialOrder, PolyRing, Polynomial

__all__ = [
    "BaseRing", "ContextError", "InvariantError", "ModulePresentation", "MonomialOrder",
    "ParseError", "PolyRing", "Polynomial", "groebner_basis", "lift", "module_subquotient",
    "divide", "normal_form", "parse_rational", "polynomial_ring", "syzygies", "unit_ideal_certificate",
]
