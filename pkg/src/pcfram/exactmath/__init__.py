"""Exact arithmetic kernel: integer polynomials, resultants, factorization."""

from fractions import Fraction as BigRat

from .intfactor import FactorBudget, IntFactorization, factor_integer, is_prime, is_probable_prime
from .poly import UniPoly, parse_rational_function, poly_gcd, poly_lcm, reduce_fraction, squarefree_decomposition, squarefree_part
from .polyfactor import PolyFactorBudget, PolyFactorization, factor_poly, is_irreducible
from .resultant import bareiss_det, discriminant, form_resultant, resultant, resultant_sylvester

__all__ = [
    "BigRat",
    "FactorBudget",
    "IntFactorization",
    "PolyFactorBudget",
    "PolyFactorization",
    "UniPoly",
    "bareiss_det",
    "discriminant",
    "factor_integer",
    "factor_poly",
    "form_resultant",
    "is_irreducible",
    "is_prime",
    "is_probable_prime",
    "parse_rational_function",
    "poly_gcd",
    "poly_lcm",
    "reduce_fraction",
    "resultant",
    "resultant_sylvester",
    "squarefree_decomposition",
    "squarefree_part",
]
