"""Finite ringed posets with localized polynomial stalks: the affine /
schematic / semiseparated calculus, quasi-coherent sheaf cohomology through
the finite Godement complex, minimal models, and the roof category."""

__version__ = "0.1.0"
