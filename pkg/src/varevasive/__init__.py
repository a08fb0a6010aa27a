"""Explicit variety-evasive subsets of F_q^n and brute-force checks of their bounds."""

from .construction import (
    EvasiveConstruction,
    build_construction,
    enumerate_points,
    evaluate_membership,
    index_to_point,
    membership_mask,
    point_to_index,
    theoretical_bound,
)
from .field import FieldSpec, make_field, parse_field
from .parameters import ExponentPlan, RegularMatrix, check_k_regular, select_exponents, vandermonde_matrix

__all__ = [
    "EvasiveConstruction",
    "ExponentPlan",
    "FieldSpec",
    "RegularMatrix",
    "build_construction",
    "check_k_regular",
    "enumerate_points",
    "evaluate_membership",
    "index_to_point",
    "make_field",
    "membership_mask",
    "parse_field",
    "point_to_index",
    "select_exponents",
    "theoretical_bound",
    "vandermonde_matrix",
]
