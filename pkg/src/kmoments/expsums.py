"""Character sum families mod p: K(chi), Gauss, Jacobi, hyper-Kloosterman, tau_2.

Each family has a spectral path (one transform over the index table gives
the value at every character) and a brute-force path kept as an oracle.
Character ``j`` means ``chi_j = eta**j`` with ``eta(g) = e(1/(p-1))``; the
quadratic character is ``j = (p-1)/2``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
import math

import numpy as np

from .arith import PrimeContext, mod_inv
from .spectral import Spectrum, dft, spectrum


def additive(ctx: PrimeContext, n: int = 1) -> np.ndarray:
    """Table of e(n a / p) indexed by the residue a."""
    a = (np.arange(ctx.p, dtype=np.int64) * (n % ctx.p)) % ctx.p
    return np.exp(2j * np.pi * a / ctx.p)


def _char_values(ctx: PrimeContext, j: int) -> np.ndarray:
    """chi_j(a) for every residue a, with chi_j(0) = 0 (also for j = 0)."""
    n = ctx.order
    out = np.zeros(ctx.p, dtype=complex)
    t = (ctx.ind[1:] * (j % n)) % n
    out[1:] = np.exp(2j * np.pi * t / n)
    return out


# -- K(chi) -------------------------------------------------------------------

@dataclass(frozen=True)
class KFamily:
    """K(chi_j) for all j, with the solution counts c(b) = #{a : a + 1/a = b}."""

    p: int
    kvals: Spectrum
    counts: np.ndarray = field(repr=False)
    discrepancy: float = 0.0

    @property
    def values(self) -> np.ndarray:
        return self.kvals.values

    @property
    def family_mask(self) -> np.ndarray:
        """Even nontrivial characters, the set A(p)."""
        return self.kvals.nontrivial_even


def k_counts(ctx: PrimeContext) -> np.ndarray:
    """c(b) = 1 + phi(b^2 - 4) for b in [0, p-1]."""
    b = np.arange(ctx.p, dtype=np.int64)
    return 1 + ctx.legendre[(b * b - 4) % ctx.p].astype(np.int64)


def k_counts_enumerated(ctx: PrimeContext) -> np.ndarray:
    """c(b) by direct enumeration of a + 1/a over the units."""
    a = np.arange(1, ctx.p, dtype=np.int64)
    inv = np.array([mod_inv(int(x), ctx.p) for x in a], dtype=np.int64)
    return np.bincount((a + inv) % ctx.p, minlength=ctx.p)


def k_direct(ctx: PrimeContext, j: int) -> complex:
    """K(chi_j) straight from the definition, O(p)."""
    a = np.arange(1, ctx.p, dtype=np.int64)
    inv = np.array([mod_inv(int(x), ctx.p) for x in a], dtype=np.int64)
    chi = _char_values(ctx, j)
    return complex(np.sum(chi[(a + inv) % ctx.p]) / math.sqrt(ctx.p))


def k_from_gauss(ctx: PrimeContext, tau: np.ndarray) -> np.ndarray:
    """K(chi) on even j through the product of Gauss sums of a square root of chi.

    Entries at odd j and at j = 0 are left as NaN.
    """
    n, half, p = ctx.order, ctx.half, ctx.p
    out = np.full(n, np.nan, dtype=complex)
    j = np.arange(2, n, 2)
    j1 = j // 2
    cross = tau[j1] * np.conj(tau[(j1 + half) % n])
    chi2 = np.exp(2j * np.pi * ((j * int(ctx.ind[2 % p])) % n) / n)
    out[j] = 2 * chi2 * np.conj(tau[half]) * cross.real / p ** 1.5
    return out


def k_family(ctx: PrimeContext, tau: np.ndarray | None = None, tol: float = 1e-8) -> KFamily:
    """K(chi_j) for every j, reconciled against the Gauss-sum form on even j."""
    counts = k_counts(ctx)
    f = counts[ctx.pow].astype(complex) / math.sqrt(ctx.p)
    kvals = spectrum(ctx, f)
    if tau is None:
        tau = gauss_table(ctx).values
    alt = k_from_gauss(ctx, tau)
    even = np.arange(2, ctx.order, 2)
    dev = float(np.max(np.abs(kvals.values[even] - alt[even]), initial=0.0))
    odd = float(np.max(np.abs(kvals.values[1::2]), initial=0.0))
    dev = max(dev, odd)
    if dev > tol:
        raise ArithmeticError(f"K(chi) routes disagree by {dev:.3e} at p={ctx.p}")
    return KFamily(ctx.p, kvals, counts, dev)


def k_first_form(ctx: PrimeContext) -> np.ndarray:
    """chi(2) p^(-1/2) sum_b chi(b) phi(b^2 - 1) for every j (valid on even nontrivial j)."""
    b = np.arange(ctx.p, dtype=np.int64)
    f = ctx.legendre[(b * b - 1) % ctx.p].astype(float)
    s = dft(f[ctx.pow])
    chi2 = ctx.char_row(2)
    return chi2 * s / math.sqrt(ctx.p)


def normalized_real(ctx: PrimeContext, family: KFamily, tau: np.ndarray) -> np.ndarray:
    """conj(chi(2)) K(chi) tau(phi) / sqrt(p) over A(p), in increasing j."""
    mask = family.family_mask
    chi2 = ctx.char_row(2)
    vals = np.conj(chi2) * family.values * tau[ctx.half] / math.sqrt(ctx.p)
    return vals[mask]


# -- Gauss and Jacobi sums ----------------------------------------------------

@dataclass(frozen=True)
class GaussTable:
    p: int
    tau: Spectrum

    @property
    def values(self) -> np.ndarray:
        return self.tau.values


def gauss_table(ctx: PrimeContext) -> GaussTable:
    """tau(chi_j) = sum_v chi_j(v) e(v/p) for all j."""
    return GaussTable(ctx.p, spectrum(ctx, additive(ctx)[ctx.pow]))


def gauss_direct(ctx: PrimeContext, j: int, n: int = 1) -> complex:
    return complex(np.sum(_char_values(ctx, j) * additive(ctx, n)))


def quadratic_gauss(ctx: PrimeContext, n: int) -> complex:
    """tau(n, phi) in closed form: eps_p phi(n) sqrt(p)."""
    return ctx.eps * int(ctx.legendre[n % ctx.p]) * math.sqrt(ctx.p)


def quadratic_gauss_direct(ctx: PrimeContext, n: int) -> complex:
    return complex(np.sum(ctx.legendre * additive(ctx, n)))


def jacobi(ctx: PrimeContext, j1: int, j2: int) -> complex:
    """J(chi_j1, chi_j2) = sum_v chi_j1(v) chi_j2(1 - v), summed directly."""
    v = np.arange(ctx.p, dtype=np.int64)
    c1 = _char_values(ctx, j1)
    c2 = _char_values(ctx, j2)
    return complex(np.sum(c1 * c2[(1 - v) % ctx.p]))


def jacobi_from_gauss(tau: np.ndarray, j1: int, j2: int) -> complex:
    n = len(tau)
    return complex(tau[j1 % n] * tau[j2 % n] / tau[(j1 + j2) % n])


def jacobi_phi_spectrum(ctx: PrimeContext) -> np.ndarray:
    """J(chi_j, phi) for every j, as the spectrum of v -> phi(1 - v)."""
    v = np.arange(ctx.p, dtype=np.int64)
    f = ctx.legendre[(1 - v) % ctx.p].astype(complex)
    return dft(f[ctx.pow])


# -- hyper-Kloosterman sums ---------------------------------------------------

@dataclass(frozen=True)
class HyperKlTable:
    """Kl_k(n, p) indexed by the residue n; entry 0 is NaN."""

    k: int
    p: int
    vals: np.ndarray = field(repr=False)

    def __call__(self, n: int) -> complex:
        n %= self.p
        if n == 0:
            raise ValueError("table covers n coprime to p only")
        return complex(self.vals[n])

    @property
    def units(self) -> np.ndarray:
        return self.vals[1:]


def _on_residues(ctx: PrimeContext, along_index: np.ndarray) -> np.ndarray:
    out = np.full(ctx.p, np.nan, dtype=complex)
    out[ctx.pow] = along_index
    return out


def hyper_kloosterman(ctx: PrimeContext, k: int, tau: np.ndarray | None = None) -> HyperKlTable:
    """Kl_k(n, p) for every unit n, by inverting sum_n chi(n) Kl_k(n) = p^((1-k)/2) tau(chi)^k."""
    if k < 2:
        raise ValueError("hyper-Kloosterman rank must be >= 2")
    if tau is None:
        tau = gauss_table(ctx).values
    coeff = tau ** k * ctx.p ** ((1 - k) / 2)
    # Kl[t] = (1/(p-1)) sum_j coeff_j e(-jt/(p-1))
    along = np.conj(dft(np.conj(coeff))) / ctx.order
    return HyperKlTable(k, ctx.p, _on_residues(ctx, along))


def hyper_kloosterman_recursive(ctx: PrimeContext, k: int) -> HyperKlTable:
    """Kl_k by the multiplicative convolution Kl_k(n) = p^(-1/2) sum_x e(x/p) Kl_(k-1)(n/x).

    O(k p^2); used as an oracle independent of the Gauss-sum route.
    """
    if k < 2:
        raise ValueError("hyper-Kloosterman rank must be >= 2")
    e = additive(ctx)[ctx.pow]
    along = multiplicative_power(e, k) * ctx.p ** ((1 - k) / 2)
    return HyperKlTable(k, ctx.p, _on_residues(ctx, along))


def multiplicative_power(h: np.ndarray, k: int) -> np.ndarray:
    """k-fold multiplicative self-convolution sum_(x_1...x_k = n) prod h(x_i).

    ``h`` is given along the index table, so the product becomes a cyclic
    convolution in the exponent. Direct O(k p^2) summation.
    """
    h = np.asarray(h, dtype=complex)
    cur = h.copy()
    for _ in range(k - 1):
        nxt = np.zeros(len(h), dtype=complex)
        for s in range(len(h)):
            nxt += h[s] * np.roll(cur, s)
        cur = nxt
    return cur


def hyper_kloosterman_direct(ctx: PrimeContext, k: int, n: int) -> complex:
    """Kl_k(n, p) by enumerating x_1..x_(k-1); tiny p only."""
    p = ctx.p
    e = additive(ctx)
    total = 0j
    units = range(1, p)

    def rec(depth, prod, acc):
        nonlocal total
        if depth == k - 1:
            last = n * mod_inv(prod, p) % p
            total += e[(acc + last) % p]
            return
        for x in units:
            rec(depth + 1, prod * x % p, acc + x)

    rec(0, 1, 0)
    return total * p ** ((1 - k) / 2)


# -- generalized Gauss sum tau_2 ----------------------------------------------

def tau2_table(ctx: PrimeContext, n: int) -> Spectrum:
    """tau_2(n, chi_j) = sum_v chi_j(v) e(n v^2 / p) for all j."""
    if n % ctx.p == 0:
        raise ValueError("tau_2 needs n coprime to p")
    v = np.arange(ctx.p, dtype=np.int64)
    f = np.exp(2j * np.pi * ((n * v * v) % ctx.p) / ctx.p)
    return spectrum(ctx, f[ctx.pow])


def tau2_direct(ctx: PrimeContext, n: int, j: int) -> complex:
    v = np.arange(ctx.p, dtype=np.int64)
    e = np.exp(2j * np.pi * ((n * v * v) % ctx.p) / ctx.p)
    return complex(np.sum(_char_values(ctx, j) * e))


def tau2_identity_rhs(ctx: PrimeContext, n: int, kvals: np.ndarray) -> np.ndarray:
    """(1 + chi(-1)) p + phi(n) tau(phi) conj(chi(2)) K(chi) sqrt(p), every j."""
    j = np.arange(ctx.order)
    parity = np.where(j % 2 == 0, 2.0, 0.0)
    chi2 = ctx.char_row(2)
    tau_phi = quadratic_gauss(ctx, 1)
    return parity * ctx.p + int(ctx.legendre[n % ctx.p]) * tau_phi * np.conj(chi2) * kvals * math.sqrt(ctx.p)


# -- checks -------------------------------------------------------------------

@dataclass
class CheckRecord:
    """Outcome of one numerical identity check."""

    name: str
    p: int
    params: dict
    lhs: complex
    rhs: complex
    scale: float
    tol: float
    deviation: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        self.deviation = abs(complex(self.lhs) - complex(self.rhs))
        self.passed = bool(self.deviation <= self.tol * self.scale)

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("lhs", "rhs"):
            z = complex(d.pop(key))
            d[key + "_re"], d[key + "_im"] = z.real, z.imag
        return d


def sample_ns(ctx: PrimeContext, count: int = 5) -> list[int]:
    """A small deterministic set of units: 1, 2, 3, -1, g, ..."""
    out: list[int] = []
    for n in (1, 2, 3, ctx.p - 1, ctx.g, 5, 7, 11):
        n %= ctx.p
        if n and n not in out:
            out.append(n)
        if len(out) == count:
            break
    return out


IDENTITY_FORMS = ("stated", "corrected")


def identity_suite(
    ctx: PrimeContext,
    kmax: int,
    ns: list[int] | None = None,
    tol: float = 1e-7,
    tau: np.ndarray | None = None,
    form: str = "stated",
) -> list[CheckRecord]:
    """Character moments of Gauss-sum products and Jacobi sums.

    ``form="stated"`` checks, for each k in [2, kmax] and each n,

    (a) sum_chi conj(chi(n)) (tau(chi) conj(tau(chi phi)))^k
        = (p-1) p^(k-1/2) Kl_k(n,p) (eps_p phi(-1))^k
    (b) sum_chi conj(chi(n)) J(chi, phi)^k = (p-1) p^((k-1)/2) Kl_k(n,p)

    These do not hold in general: the left side of (b) is (p-1) times an
    integer. ``form="corrected"`` checks what orthogonality actually gives,

    (a') sum_chi conj(chi(n)) (tau(chi) conj(tau(phi)))^k
         = (p-1) p^(k-1/2) Kl_k(n,p) (eps_p phi(-1))^k
    (b') sum_chi conj(chi(n)) J(chi, phi)^k
         = (p-1) sum_(v_1...v_k = n) prod phi(1 - v_i)

    Left sides come from Gauss and Jacobi spectra; right sides from direct
    multiplicative convolutions that never touch Gauss sums.
    """
    if form not in IDENTITY_FORMS:
        raise ValueError(f"unknown identity form {form!r}")
    p, half, order = ctx.p, ctx.half, ctx.order
    if tau is None:
        tau = gauss_table(ctx).values
    ns = ns if ns is not None else sample_ns(ctx)
    jac = jacobi_phi_spectrum(ctx)
    if form == "stated":
        cross = tau * np.conj(np.roll(tau, -half))
    else:
        cross = tau * np.conj(tau[half])
        v = ctx.pow
        shifted = ctx.legendre[(1 - v) % p].astype(complex)
    sign = ctx.eps * int(ctx.legendre[p - 1])
    suffix = "" if form == "stated" else "_corrected"
    records = []
    for k in range(2, kmax + 1):
        kl = hyper_kloosterman_recursive(ctx, k)
        if form == "corrected":
            counts = _on_residues(ctx, multiplicative_power(shifted, k))
        for n in ns:
            chi_bar = np.conj(ctx.char_row(n))
            lhs_a = complex(np.sum(chi_bar * cross ** k))
            rhs_a = order * p ** (k - 0.5) * kl(n) * sign ** k
            records.append(CheckRecord("gauss_product_moment" + suffix, p, {"k": k, "n": n},
                                       lhs_a, rhs_a, order * p ** (k - 0.5), tol))
            lhs_b = complex(np.sum(chi_bar * jac ** k))
            if form == "stated":
                rhs_b = order * p ** ((k - 1) / 2) * kl(n)
            else:
                rhs_b = order * counts[n]
            records.append(CheckRecord("jacobi_moment" + suffix, p, {"k": k, "n": n},
                                       lhs_b, rhs_b, order * p ** ((k - 1) / 2), tol))
    return records


def basic_checks(ctx: PrimeContext, tol: float = 1e-7, pairs: int = 12) -> list[CheckRecord]:
    """Quadratic Gauss sums, Jacobi/Gauss ratio, both transforms of K, tau_2 identity."""
    p, order, half = ctx.p, ctx.order, ctx.half
    sq = math.sqrt(p)
    tau = gauss_table(ctx).values
    records = []

    for n in sample_ns(ctx) + [0]:
        records.append(CheckRecord("quadratic_gauss", p, {"n": n},
                                   quadratic_gauss_direct(ctx, n), quadratic_gauss(ctx, n), sq, tol))

    # deterministic spread of nondegenerate character pairs
    js = [j for j in range(1, order) if j != half] or [half]
    chosen = 0
    for i in range(len(js)):
        j1 = js[(i * 7919) % len(js)]
        # the first offset that avoids chi1 chi2 trivial
        j2 = next((js[(i * 104729 + off) % len(js)] for off in (3, 1, 2)
                   if (j1 + js[(i * 104729 + off) % len(js)]) % order), None)
        if j2 is None:
            continue
        records.append(CheckRecord("jacobi_gauss", p, {"j1": j1, "j2": j2},
                                   jacobi(ctx, j1, j2), jacobi_from_gauss(tau, j1, j2), sq, tol))
        chosen += 1
        if chosen == pairs:
            break

    fam = k_family(ctx, tau)
    first = k_first_form(ctx)
    alt = k_from_gauss(ctx, tau)
    for j in range(2, order, 2):
        records.append(CheckRecord("k_first_form", p, {"j": j}, fam.values[j], first[j], 2.0, tol))
        records.append(CheckRecord("k_gauss_form", p, {"j": j}, fam.values[j], alt[j], 2.0, tol))
    odd_max = float(np.max(np.abs(fam.values[1::2]), initial=0.0))
    records.append(CheckRecord("k_odd_vanishes", p, {}, odd_max, 0.0, 2.0, tol))

    for n in sample_ns(ctx, 3):
        t2 = tau2_table(ctx, n).values
        rhs = tau2_identity_rhs(ctx, n, fam.values)
        lhs = np.abs(t2[1:]) ** 2
        dev_j = int(np.argmax(np.abs(lhs - rhs[1:]))) + 1
        records.append(CheckRecord("tau2_identity", p, {"n": n, "worst_j": dev_j},
                                   lhs[dev_j - 1], rhs[dev_j], 2.0 * p, tol))
    return records


def half_range_ratio(ctx: PrimeContext, k: int, a: int, tau: np.ndarray | None = None) -> float:
    """|sum_(1<=i<=(p-1)/2) eta^i(a) (tau(eta^i) conj(tau(eta^i phi)))^k| / (k p^(k+1/2) log p)."""
    if k < 1 or a % ctx.p == 0:
        raise ValueError("need k >= 1 and a coprime to p")
    if tau is None:
        tau = gauss_table(ctx).values
    i = np.arange(1, ctx.half + 1)
    chi_a = ctx.char_row(a)[i]
    cross = tau[i] * np.conj(tau[(i + ctx.half) % ctx.order])
    total = abs(np.sum(chi_a * cross ** k))
    return float(total / (k * ctx.p ** (k + 0.5) * math.log(ctx.p)))
