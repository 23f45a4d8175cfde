"""Gamma, digamma, binomials, Bessel J0, and the Gamma/trigonometric identities."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np
from scipy import integrate

GAMMA_MAX = 171.0


@dataclass(frozen=True)
class SpecialFnConfig:
    """Truncation and quadrature settings used by this module."""

    bessel_rel_cutoff: float = 1e-16
    bessel_max_arg: float = 50.0
    quad_nodes: int = 10_000
    prop_a1_base_terms: int = 256
    prop_a1_levels: int = 7


CONFIG = SpecialFnConfig()


def gamma_fn(x: float) -> float:
    if not 0 < x < GAMMA_MAX:
        raise OverflowError(f"gamma argument {x} outside (0, {GAMMA_MAX})")
    return math.gamma(x)


def rgamma(x: float) -> float:
    """1 / Gamma(x), exactly 0 at the non-positive integers."""
    if x <= 0 and x == math.floor(x):
        return 0.0
    return 1.0 / math.gamma(x)


def binomial(n: int, k: int) -> int:
    return math.comb(n, k)


def log_binomial(n: float, k: float) -> float:
    """log C(n, k); exact integer arithmetic for n <= 60."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if n <= 60 and float(n).is_integer() and float(k).is_integer():
        return math.log(math.comb(int(n), int(k)))
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def central_ratio(kappa: float) -> float:
    """Gamma(2 kappa + 1) / (2 Gamma(kappa + 1)^2), the leading moment constant."""
    if kappa < 0:
        raise ValueError("kappa must be non-negative")
    return 0.5 * math.exp(math.lgamma(2 * kappa + 1) - 2 * math.lgamma(kappa + 1))


_DIGAMMA_TAIL = (1 / 12, -1 / 120, 1 / 252, -1 / 240, 1 / 132, -691 / 32760, 1 / 12, -3617 / 8160)


def digamma(x):
    """psi(x) for x > 0 (scalar or array).

    Shifts the argument up to >= 10 with psi(x) = psi(x + 1) - 1/x, then
    uses the asymptotic series with eight Bernoulli terms.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("digamma implemented for x > 0 only")
    acc = np.zeros_like(x)
    y = x.copy()
    while True:
        low = y < 10
        if not np.any(low):
            break
        acc[low] -= 1.0 / y[low]
        y[low] += 1.0
    inv2 = 1.0 / (y * y)
    series = np.zeros_like(y)
    for c in reversed(_DIGAMMA_TAIL):
        series = (series + c) * inv2
    out = acc + np.log(y) - 0.5 / y - series
    return out if out.ndim else float(out)


EULER_GAMMA = -float(digamma(1.0))


# -- Bessel -------------------------------------------------------------------

def bessel_j0(z: float) -> float:
    """J_0 from its power series sum_k (-1)^k (z/2)^(2k) / (k!)^2.

    Past |z| ~ 10 the alternating terms grow to ~e^|z| / |z| and a float sum
    loses about log10 of that many digits, so the terms are summed exactly as
    rationals (z itself is a dyadic rational) and rounded once.
    """
    if abs(z) > CONFIG.bessel_max_arg:
        raise ValueError(f"|z| > {CONFIG.bessel_max_arg} is outside the series regime")
    q = -Fraction(z) ** 2 / 4
    term, total, k = Fraction(1), Fraction(1), 0
    cutoff = Fraction(CONFIG.bessel_rel_cutoff)
    while True:
        k += 1
        term *= q / (k * k)
        total += term
        # past the peak and negligible
        if k > abs(z) and abs(term) < cutoff * abs(total):
            break
    return float(total)


def bessel_j0_integral(z: float, nodes: int | None = None) -> float:
    """J_0 by the trapezoid rule on (1/2pi) int_(-pi)^(pi) exp(i z cos phi) dphi.

    The integrand is smooth and periodic, so the rule converges geometrically.
    """
    nodes = nodes or CONFIG.quad_nodes
    phi = -np.pi + 2 * np.pi * np.arange(nodes) / nodes
    return float(np.mean(np.exp(1j * z * np.cos(phi))).real)


# -- Gamma-function identity ---------------------------------------------------

@dataclass(frozen=True)
class IdentityCheck:
    lhs: float
    rhs: float
    passed: bool


def prop_a1_partial(kappa: float, terms: int) -> float:
    """sum_(j<terms) C(kappa, 2j) C(2j, j) 4^(-j), terms built by their ratio."""
    t = 1.0
    out = [t]
    for j in range(terms - 1):
        t *= (kappa - 2 * j) * (kappa - 2 * j - 1) / (4.0 * (j + 1) ** 2)
        if t == 0.0:
            break
        out.append(t)
    return math.fsum(out)


def prop_a1_series(kappa: float) -> float:
    """sum_(j>=0) Gamma(k+1) / ((2j)! Gamma(k-2j+1)) C(2j,j) 4^(-j), for k = kappa.

    Finite for integer kappa (1/Gamma vanishes at the poles). Otherwise the
    terms have constant sign and decay like j^(-kappa-3/2), so the partial
    sums S_J = S + sum_r c_r J^(-kappa-1/2-r) are extrapolated with
    Richardson elimination of those known exponents over J = J0 * 2^i.
    """
    if kappa < 0:
        raise ValueError("kappa must be non-negative")
    if float(kappa).is_integer():
        return prop_a1_partial(kappa, int(kappa) // 2 + 2)
    base, levels = CONFIG.prop_a1_base_terms, CONFIG.prop_a1_levels
    table = [prop_a1_partial(kappa, base * 2 ** i) for i in range(levels)]
    for r in range(levels - 1):
        factor = 2.0 ** (kappa + 0.5 + r)
        table = [(factor * table[i + 1] - table[i]) / (factor - 1) for i in range(len(table) - 1)]
    return table[0]


def prop_a1_check(kappa: float, tol: float) -> IdentityCheck:
    """Compare the series with Gamma(2 kappa + 1) / (2^kappa Gamma(kappa + 1)^2)."""
    lhs = prop_a1_series(kappa)
    rhs = math.exp(math.lgamma(2 * kappa + 1) - 2 * math.lgamma(kappa + 1) - kappa * math.log(2))
    return IdentityCheck(lhs, rhs, abs(lhs - rhs) <= tol * max(1.0, abs(rhs)))


def trig_integral_check(mu: float, tol: float = 1e-8) -> IdentityCheck:
    """int_0^(pi/2) cos(theta)^(2 mu) dtheta against pi / 2^(2mu+1) Gamma(2mu+1) / Gamma(mu+1)^2."""
    if mu <= -0.5:
        raise ValueError("need mu > -1/2")
    quad, _ = integrate.quad(lambda th: math.cos(th) ** (2 * mu), 0.0, math.pi / 2,
                             epsabs=1e-13, epsrel=1e-10, limit=200)
    closed = math.pi / 2 ** (2 * mu + 1) * math.exp(math.lgamma(2 * mu + 1) - 2 * math.lgamma(mu + 1))
    return IdentityCheck(quad, closed, abs(quad - closed) <= tol * max(1.0, abs(closed)))
