"""Partial Euler products of quadratic Dedekind zeta functions and their dyadic series."""

from .dyadic import error_table, fe_residual, factorization_residuals, p_series, q1, q2, q_analytic, q_exact_even
from .euler import dedekind_zeta, p_product, sieve
from .lfunc import dirichlet_l, l_even_exact, zeta_even_exact, zeta_real
from .quadchar import character

__all__ = [
    "character",
    "dedekind_zeta",
    "dirichlet_l",
    "error_table",
    "factorization_residuals",
    "fe_residual",
    "l_even_exact",
    "p_product",
    "p_series",
    "q1",
    "q2",
    "q_analytic",
    "q_exact_even",
    "sieve",
    "zeta_even_exact",
    "zeta_real",
]
