"""Exact invariants and verdicts for pencils of quadrics and regular sequences."""

from .fields import QQ, PrimeField, parse_field
from .poly import MultiPoly, UniPoly, parse_poly, parse_forms

__version__ = "0.1.0"

__all__ = [
    "QQ",
    "PrimeField",
    "parse_field",
    "MultiPoly",
    "UniPoly",
    "parse_poly",
    "parse_forms",
]
