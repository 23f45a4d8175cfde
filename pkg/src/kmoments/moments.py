"""Moments of K(chi) over the nontrivial characters and their predicted main terms."""

from __future__ import annotations

from dataclasses import asdict, dataclass
import math

import numpy as np

from .arith import PrimeContext
from .expsums import GaussTable, KFamily
from .special import central_ratio

KINDS = ("abs", "mixed", "star", "l1", "lhalf", "lhalf2")


@dataclass
class MomentReport:
    """A computed moment next to its predicted main term.

    ``bound_ratio`` is ``abs_err`` divided by the error envelope for the
    moment (without an implied constant); ``rel_err`` is None when the main
    term vanishes.
    """

    p: int
    kind: str
    computed: complex
    predicted_main: complex
    envelope: float
    kappa: float | None = None
    k: int | None = None
    l: int | None = None
    n: int | None = None
    s: float | None = None

    @property
    def abs_err(self) -> float:
        return abs(complex(self.computed) - complex(self.predicted_main))

    @property
    def rel_err(self) -> float | None:
        main = abs(complex(self.predicted_main))
        return self.abs_err / main if main else None

    @property
    def bound_ratio(self) -> float:
        return self.abs_err / self.envelope

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(abs_err=self.abs_err, rel_err=self.rel_err, bound_ratio=self.bound_ratio)
        return d


def _check_unit(p: int, n: int) -> int:
    if n % p == 0:
        raise ValueError(f"n must be coprime to p={p}")
    return n % p


def abs_powers(family: KFamily, kappa: float) -> np.ndarray:
    """|K(chi_j)|^(2 kappa) on nontrivial j (index 0 set to 0); |K| = 0 gives exactly 0."""
    mag = np.abs(family.values)
    out = np.zeros_like(mag)
    pos = mag > 0
    out[pos] = np.exp(2 * kappa * np.log(mag[pos]))
    out[0] = 0.0
    # odd characters vanish identically; drop rounding residue
    out[1::2] = 0.0
    return out


def moment_abs(family: KFamily, ctx: PrimeContext, kappa: float, n: int = 1) -> MomentReport:
    """M_kappa(n, p) = sum over nontrivial chi of chi(n) |K(chi)|^(2 kappa)."""
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    p = ctx.p
    n = _check_unit(p, n)
    weights = abs_powers(family, kappa)
    computed = complex(np.sum(ctx.char_row(n) * weights))
    delta = 1 if n in (1, p - 1) else 0
    main = central_ratio(kappa) * delta * p
    envelope = kappa * 4 ** kappa * math.sqrt(p) * math.log(p)
    return MomentReport(p, "abs", computed, main, envelope, kappa=float(kappa), n=n)


def mixed_delta(p: int, k: int, l: int, n: int) -> int:
    """1 when 2^k = +-2^l n mod p, else 0."""
    lhs = pow(2, k, p)
    rhs = pow(2, l, p) * n % p
    return int(lhs == rhs or lhs == (-rhs) % p)


def moment_mixed(family: KFamily, ctx: PrimeContext, k: int, l: int, n: int = 1) -> MomentReport:
    """M_(k,l)(n, p) = sum over nontrivial chi of chi(n) conj(K)^k K^l."""
    if k < 0 or l < 0:
        raise ValueError("k and l must be non-negative")
    if k == l == 0:
        raise ValueError("k = l = 0 has no meaningful main term")
    p = ctx.p
    n = _check_unit(p, n)
    kv = family.values.copy()
    kv[0] = 0.0
    kv[1::2] = 0.0
    terms = ctx.char_row(n) * np.conj(kv) ** k * kv ** l
    computed = complex(np.sum(terms[1:]))
    if (k + l) % 2:
        main = 0j
    else:
        main = ctx.eps ** (k - l) * math.comb(k + l, (k + l) // 2) * mixed_delta(p, k, l, n) * p / 2
    envelope = (k + l) * 2 ** (k + l) * math.sqrt(p) * math.log(p)
    return MomentReport(p, "mixed", computed, complex(main), envelope, k=k, l=l, n=n)


def moment_star(family: KFamily, gauss: GaussTable, ctx: PrimeContext, k: int) -> MomentReport:
    """M*_k(p): k-th moment of the real normalization conj(chi(2)) K tau(phi) / sqrt(p) over A(p)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    p = ctx.p
    mask = family.family_mask
    chi2 = ctx.char_row(2)
    x = (np.conj(chi2) * family.values * gauss.values[ctx.half] / math.sqrt(p))[mask]
    computed = complex(np.sum(x ** k))
    main = 0.5 * math.comb(k, k // 2) * p if k % 2 == 0 else 0.0
    envelope = k * 2 ** k * math.sqrt(p) * math.log(p)
    return MomentReport(p, "star", computed, complex(main), envelope, k=k)
