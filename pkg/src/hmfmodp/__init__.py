"""Exact mod-p q-expansion calculus for Hilbert modular forms over real quadratic fields."""

from .quadfield import FieldElement, QuadraticField, elem_norm, is_totally_positive, make_field

__version__ = "0.1.0"

__all__ = [
    "FieldElement",
    "QuadraticField",
    "elem_norm",
    "is_totally_positive",
    "make_field",
]
