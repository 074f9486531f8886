"""Exact scalar, polynomial and multilinear algebra."""
from .forms import OneForm
from .matrix import PolyMatrix
from .multivector import MultiVector, lie_derivative, schouten_bracket, truncate, wedge
from .poly import Poly
from .scalar import GaussianRational, as_scalar, format_scalar, parse_scalar

__all__ = [
    "GaussianRational",
    "MultiVector",
    "OneForm",
    "Poly",
    "PolyMatrix",
    "as_scalar",
    "format_scalar",
    "lie_derivative",
    "parse_scalar",
    "schouten_bracket",
    "truncate",
    "wedge",
]
