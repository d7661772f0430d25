"""Exact computations with non-positively graded commutative dg algebras over ℚ."""

__version__ = "0.1.0"
