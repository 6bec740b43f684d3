"""Exact arithmetic: finite fields, polynomials over them, integer matrices."""

from .fields import FiniteField, FieldError, fq_make, field_of_size, embedding
from .intmat import IntMatrix, smith_normal_form, hnf, hnf_membership, kernel
from .poly import Polynomial, poly_factor, irreducibles_of_degree

__all__ = [
    "FiniteField",
    "FieldError",
    "fq_make",
    "field_of_size",
    "embedding",
    "IntMatrix",
    "smith_normal_form",
    "hnf",
    "hnf_membership",
    "kernel",
    "Polynomial",
    "poly_factor",
    "irreducibles_of_degree",
]
