"""Exact-arithmetic workbench for c-differential analysis of S-box candidates."""

from .field import (DEFAULT_ORDER_CAP, Embedding, Field, FieldElement,
                    FieldError, FieldMismatchError, extend, make_field)
from .poly import Poly, PolyError

__all__ = [
    "DEFAULT_ORDER_CAP",
    "Embedding",
    "Field",
    "FieldElement",
    "FieldError",
    "FieldMismatchError",
    "Poly",
    "PolyError",
    "extend",
    "make_field",
]

__version__ = "0.1.0"
