"""Exact arithmetic in ``Q[x_1..x_n]`` and ``Q(x_1..x_n)`` with the permutation action."""

from hilbert90.exactfield.poly import MultiPoly, norm_coeff, grlex_key
from hilbert90.exactfield.ratfunc import RatFunc, as_ratfunc
from hilbert90.exactfield.perm import (
    FinPermutation,
    adjacent_transposition,
    apply_permutation,
    is_fixed_by,
)
from hilbert90.exactfield.symmetric import elementary_symmetric, vandermonde_product
from hilbert90.exactfield.grammar import parse_ratfunc, parse_poly, format_ratfunc, format_poly

__all__ = [
    "MultiPoly",
    "RatFunc",
    "FinPermutation",
    "apply_permutation",
    "adjacent_transposition",
    "is_fixed_by",
    "elementary_symmetric",
    "vandermonde_product",
    "parse_ratfunc",
    "parse_poly",
    "format_ratfunc",
    "format_poly",
    "as_ratfunc",
    "norm_coeff",
    "grlex_key",
]
