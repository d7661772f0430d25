"""Commutative dg algebras: elements, morphisms, cohomology and constructions."""

from .algebra import (AlgebraError, DgAlgebra, GradedElement, Generator, koszul,
                      polynomial_algebra, zero_algebra)

__all__ = ["AlgebraError", "DgAlgebra", "GradedElement", "Generator", "koszul",
           "polynomial_algebra", "zero_algebra"]
