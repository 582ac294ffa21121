"""Exact computations with the queer Lie superalgebra q(2) and its weight supermodules."""

__version__ = "0.1.0"
