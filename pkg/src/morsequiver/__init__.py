"""Morse neighborhoods, gradient-flow quivers and spectral sequences
for piecewise-linear scalar fields on simplicial surfaces."""

__version__ = "0.1.0"

from .fields import FieldTag
from .poly import PoincarePolynomial

__all__ = ["FieldTag", "PoincarePolynomial", "__version__"]
