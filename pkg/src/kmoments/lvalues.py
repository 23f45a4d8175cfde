"""Dirichlet L-values mod p at s = 1 and s = 1/2, the constant S, weighted moments."""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from scipy import integrate

from .arith import PrimeContext
from .expsums import GaussTable, KFamily
from .moments import MomentReport, abs_powers
from .spectral import dft
from .special import EULER_GAMMA, central_ratio, digamma

# Bernoulli numbers B_2 .. B_12
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730)
HURWITZ_TERMS = 50


def hurwitz_zeta(s: float, a):
    """zeta(s, a) = sum_(m>=0) (m + a)^(-s) for s > 0, s != 1, 0 < a <= 1.

    Euler-Maclaurin: direct sum of the first HURWITZ_TERMS terms, then the
    integral, half-term and Bernoulli corrections through B_12 at N = a + M.
    Accepts an array of ``a``.
    """
    if s == 1:
        raise ValueError("zeta(s, a) has a pole at s = 1")
    if s <= 0:
        raise ValueError("implemented for s > 0")
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0) or np.any(a > 1):
        raise ValueError("need 0 < a <= 1")
    m = np.arange(HURWITZ_TERMS, dtype=float)
    head = np.sum((a[..., None] + m) ** (-s), axis=-1)
    big = a + HURWITZ_TERMS
    tail = big ** (1 - s) / (s - 1) + 0.5 * big ** (-s)
    # rising factorial s (s+1) ... (s+2k-2) over (2k)!
    coef = s
    power = big ** (-s - 1)
    fact = 2.0
    for k, b in enumerate(_BERNOULLI, start=1):
        tail = tail + b / fact * coef * power
        coef *= (s + 2 * k - 1) * (s + 2 * k)
        power = power / (big * big)
        fact *= (2 * k + 1) * (2 * k + 2)
    out = head + tail
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class LValueTable:
    """L(s, chi_j) indexed by j in [0, p-2]; the trivial entry is NaN."""

    p: int
    s: float
    vals: np.ndarray
    method: str

    def __getitem__(self, j):
        return self.vals[j]


def l_at_half(ctx: PrimeContext) -> LValueTable:
    """L(1/2, chi) = p^(-1/2) sum_a chi(a) zeta(1/2, a/p) for every nontrivial chi."""
    a = np.arange(1, ctx.p) / ctx.p
    z = np.empty(ctx.p)
    z[1:] = hurwitz_zeta(0.5, a)
    vals = dft(z[ctx.pow].astype(complex)) / math.sqrt(ctx.p)
    vals[0] = np.nan
    return LValueTable(ctx.p, 0.5, vals, "hurwitz-euler-maclaurin")


def l_at_one(ctx: PrimeContext) -> LValueTable:
    """L(1, chi) = -(1/p) sum_a chi(a) psi(a/p) for every nontrivial chi."""
    psi = np.empty(ctx.p)
    psi[1:] = digamma(np.arange(1, ctx.p) / ctx.p)
    vals = -dft(psi[ctx.pow].astype(complex)) / ctx.p
    vals[0] = np.nan
    return LValueTable(ctx.p, 1.0, vals, "digamma-closed-form")


def l_at_one_even(ctx: PrimeContext, gauss: GaussTable) -> np.ndarray:
    """L(1, chi) for even chi via -(tau(chi)/p) sum_a conj(chi(a)) log(2 sin(pi a / p)).

    Odd and trivial entries are NaN.
    """
    a = np.arange(1, ctx.p)
    logs = np.empty(ctx.p)
    logs[1:] = np.log(2 * np.sin(np.pi * a / ctx.p))
    f = logs[ctx.pow].astype(complex)
    # sum_t f[t] e(-jt/n) = conj(sum_t f[t] e(jt/n)) for real f
    conj_sums = np.conj(dft(f))
    out = -gauss.values * conj_sums / ctx.p
    out[1::2] = np.nan
    out[0] = np.nan
    return out


def l_smoothed_oracle(ctx: PrimeContext, j: int, s: float = 0.5, x: float = 1e6) -> complex:
    """Abel-smoothed sum_n chi(n) n^(-s) exp(-n/X), truncated where the weight is negligible."""
    nmax = int(40 * x)
    total = 0j
    chunk = 1_000_000
    row = np.exp(2j * np.pi * ((j * ctx.ind) % ctx.order) / ctx.order)
    row[0] = 0
    for start in range(1, nmax + 1, chunk):
        n = np.arange(start, min(nmax, start + chunk - 1) + 1, dtype=np.int64)
        total += np.sum(row[n % ctx.p] * n ** (-s) * np.exp(-n / x))
    return complex(total)


# -- the constant S = sum beta(n)^2 / n^2 -----------------------------------

def beta_prime_power(nu: int) -> float:
    return math.comb(2 * nu, nu) / 4 ** nu


def primes_upto(limit: int) -> np.ndarray:
    """Sieve of Eratosthenes."""
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, int(limit ** 0.5) + 1):
        if sieve[q]:
            sieve[q * q::q] = False
    return np.flatnonzero(sieve)


def beta_table(limit: int) -> np.ndarray:
    """beta(n) for 0 <= n <= limit (beta(0) = 0).

    beta(q^e) / beta(q^(e-1)) = (2e - 1) / (2e), so multiplying every
    multiple of q^e by that ratio, for all prime powers, builds beta.
    """
    beta = np.ones(limit + 1)
    beta[0] = 0.0
    for q in primes_upto(limit).tolist():
        qe, e = q, 1
        while qe <= limit:
            beta[qe::qe] *= (2 * e - 1) / (2 * e)
            qe *= q
            e += 1
    return beta


def prime_zeta(s: int, terms: int = 40) -> float:
    """P(s) = sum_q q^(-s) over primes, by Moebius inversion of log zeta(ks)."""
    total = []
    for k in range(1, terms + 1):
        mu = _moebius(k)
        if mu:
            total.append(mu / k * math.log(float(hurwitz_zeta(k * s, 1.0))))
    return math.fsum(total)


def _moebius(n: int) -> int:
    out, q = 1, 2
    while q * q <= n:
        if n % q == 0:
            n //= q
            if n % q == 0:
                return 0
            out = -out
        q += 1
    return -out if n > 1 else out


def euler_factor(q: int, tol: float = 1e-20) -> float:
    """sum_nu beta(q^nu)^2 q^(-2 nu)."""
    x = 1.0 / (q * q)
    term, nu, acc = 1.0, 0, [1.0]
    while term > tol:
        nu += 1
        term = (beta_prime_power(nu) ** 2) * x ** nu
        acc.append(term)
    return math.fsum(acc)


@dataclass(frozen=True)
class BetaSeries:
    """Both routes to S = sum_(n>=1) beta(n)^2 / n^2."""

    cutoff: int
    partial: float
    tail: float
    prime_bound: int
    euler_product: float

    @property
    def series(self) -> float:
        return self.partial + self.tail


def beta_series(cutoff: int = 1_000_000, prime_bound: int = 100_000) -> BetaSeries:
    """Truncated series with a fitted tail, and the Euler product with its tail.

    Series tail: A(t) = sum_(n<=t) beta(n)^2 is fitted to
    t (log t)^(-3/4) (c0 + c1 / log t) on [cutoff/8, cutoff], and
    sum_(n>N) beta(n)^2/n^2 = -A(N)/N^2 + 2 int_N^oo A(t) t^(-3) dt is
    integrated from the fit.

    Euler tail: for q > P the local factor is 1 + 1/(4q^2) + O(q^-4), so the
    remaining product is exp(sum_(q>P) q^-2 / 4) with the prime sum taken
    as P(2) minus the primes up to P.
    """
    beta = beta_table(cutoff)
    n = np.arange(1, cutoff + 1, dtype=float)
    b2 = beta[1:] ** 2
    partial = math.fsum(b2 / n ** 2)

    cum = np.cumsum(b2)
    pts = np.unique(np.geomspace(cutoff // 8, cutoff, 64).astype(np.int64))
    t = pts.astype(float)
    lg = np.log(t)
    design = np.column_stack([t * lg ** -0.75, t * lg ** -1.75])
    (c0, c1), *_ = np.linalg.lstsq(design, cum[pts - 1], rcond=None)

    def model(x):
        lx = math.log(x)
        return x * (c0 * lx ** -0.75 + c1 * lx ** -1.75)

    # x = cutoff * u keeps the integrand O(1)
    density = lambda u: model(cutoff * u) / (cutoff * u)
    integral, _ = integrate.quad(lambda u: density(u) / u ** 2, 1.0, np.inf, epsrel=1e-12, limit=200)
    tail = (2 * integral - density(1.0)) / cutoff

    primes = primes_upto(prime_bound)
    log_prod = math.fsum(math.log(euler_factor(int(q))) for q in primes)
    rest = prime_zeta(2) - math.fsum((1.0 / primes.astype(float) ** 2).tolist())
    euler = math.exp(log_prod + rest / 4)
    return BetaSeries(cutoff, partial, tail, prime_bound, euler)


def frak_s(tol: float = 1e-8, cutoff: int = 1_000_000, prime_bound: int = 100_000) -> float:
    """The constant S, returned from the Euler product once both routes agree within tol."""
    if tol < 1e-10:
        raise ValueError("tol below 1e-10 is beyond the routes' accuracy")
    bs = beta_series(cutoff, prime_bound)
    if abs(bs.series - bs.euler_product) > tol:
        raise ArithmeticError(
            f"series {bs.series!r} and Euler product {bs.euler_product!r} differ by more than {tol}")
    return bs.euler_product


# -- weighted moments ---------------------------------------------------------

def weighted_moment_l1(family: KFamily, lvals: LValueTable, kappa: float, frak: float) -> MomentReport:
    """sum over nontrivial chi of |K(chi)|^(2 kappa) |L(1, chi)| against c(kappa) S p."""
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    p = family.p
    w = abs_powers(family, kappa)
    lv = np.abs(lvals.vals[1:])
    computed = float(np.sum(w[1:] * lv))
    main = central_ratio(kappa) * frak * p
    envelope = 4 ** kappa * math.sqrt(p) * math.log(p)
    return MomentReport(p, "l1", computed, main, envelope, kappa=float(kappa), s=1.0)


def lhalf_main(p: int) -> float:
    return math.log(p / (8 * math.pi)) - math.pi / 2 + EULER_GAMMA


def weighted_moment_lhalf(family: KFamily, lvals: LValueTable, kappa: float) -> MomentReport:
    """sum over nontrivial chi of |K(chi)|^(2 kappa) |L(1/2, chi)|^2 against c(kappa) p (log(p/8pi) - pi/2 + gamma)."""
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    p = family.p
    w = abs_powers(family, kappa)
    lv = np.abs(lvals.vals[1:]) ** 2
    computed = float(np.sum(w[1:] * lv))
    main = central_ratio(kappa) * p * lhalf_main(p)
    # O(5^kappa p^(1 - delta)) with delta -> 1/8
    envelope = 5 ** kappa * p ** 0.875
    return MomentReport(p, "lhalf", computed, main, envelope, kappa=float(kappa), s=0.5)


def second_moment_lhalf(lvals: LValueTable) -> MomentReport:
    """sum over even nontrivial chi of |L(1/2, chi)|^2 against ((p-1)^2 / 2p)(log(p/8pi) - pi/2 + gamma)."""
    p = lvals.p
    j = np.arange(2, p - 1, 2)
    computed = float(np.sum(np.abs(lvals.vals[j]) ** 2))
    main = (p - 1) ** 2 / (2 * p) * lhalf_main(p)
    return MomentReport(p, "lhalf2", computed, main, math.sqrt(p), s=0.5)
