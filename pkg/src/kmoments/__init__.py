"""Multiplicative analogues of Kloosterman sums modulo a prime.

K(chi) = p^(-1/2) sum_(a != 0) chi(a + 1/a) is evaluated for every
Dirichlet character mod p at once, with moments, L-value weights and
equidistribution statistics built on top.
"""

from .arith import PrimeContext, build_context, is_prime, primitive_root
from .expsums import KFamily, gauss_table, hyper_kloosterman, k_family
from .moments import MomentReport, moment_abs, moment_mixed, moment_star

__all__ = [
    "PrimeContext", "build_context", "is_prime", "primitive_root",
    "KFamily", "gauss_table", "hyper_kloosterman", "k_family",
    "MomentReport", "moment_abs", "moment_mixed", "moment_star",
]
__version__ = "0.1.0"
