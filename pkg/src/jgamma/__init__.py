"""Desk-scale computations with permutative indexing categories,
Gamma-spaces, commutative monoid diagrams, and graded unit groups."""

__version__ = "0.1.0"
