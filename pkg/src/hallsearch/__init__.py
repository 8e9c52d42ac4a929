"""Exact search for small nonzero values of |x^3 - y^2|."""

from hallsearch.exact_arith import HallPoint, hall_k, isqrt, nearest_root_square, ratio_at_least, ratio_decimal

__version__ = "0.1.0"

__all__ = [
    "HallPoint",
    "hall_k",
    "isqrt",
    "nearest_root_square",
    "ratio_at_least",
    "ratio_decimal",
]
