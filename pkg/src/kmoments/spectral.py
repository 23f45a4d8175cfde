"""Character spectra of functions on the multiplicative group mod p.

A function ``f`` on (Z/pZ)^x is stored along the index table, entry ``t``
holding ``f(g**t)``. Its spectrum is

    S[j] = sum_t f(g**t) * e(j t / (p - 1)),

i.e. the character sum of ``f`` against ``chi_j = eta**j`` for every ``j``.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass

import numpy as np

from .arith import PrimeContext, prime_factors

MODES = ("naive", "fast", "verify-both")
VERIFY_BOTH_MAX_N = 2002
# largest prime factor for which the length is handed to the mixed-radix FFT
SMOOTH_BOUND = 13

_mode = contextvars.ContextVar("kmoments_fft_mode", default="fast")


class SpectralMismatch(RuntimeError):
    """Raised in verify-both mode when the two transforms disagree."""


@dataclass(frozen=True)
class Spectrum:
    """Values of a character sum family at every chi_j, j in [0, p-2]."""

    p: int
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.p - 1:
            raise ValueError("spectrum length must be p - 1")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, j):
        return self.values[j]

    @property
    def even(self) -> np.ndarray:
        """Boolean mask of even characters (j even)."""
        return np.arange(self.p - 1) % 2 == 0

    @property
    def nontrivial_even(self) -> np.ndarray:
        """Mask of the family A(p): even and j != 0."""
        mask = self.even.copy()
        mask[0] = False
        return mask


def get_mode() -> str:
    return _mode.get()


@contextlib.contextmanager
def use_mode(mode: str):
    """Temporarily select the transform used by :func:`dft`."""
    if mode not in MODES:
        raise ValueError(f"unknown fft mode {mode!r}")
    token = _mode.set(mode)
    try:
        yield
    finally:
        _mode.reset(token)


def on_group(ctx: PrimeContext, values_by_residue) -> np.ndarray:
    """Reorder a table indexed by residue a in [0, p-1] along the index table."""
    arr = np.asarray(values_by_residue)
    return arr[ctx.pow]


def dft_naive(f) -> np.ndarray:
    """Direct O(n^2) evaluation of S[j] = sum_t f[t] e(jt/n).

    Exponents are reduced exactly in integers and each row is reduced with
    numpy's pairwise summation.
    """
    f = np.asarray(f, dtype=complex)
    n = len(f)
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    t = np.arange(n, dtype=np.int64)
    out = np.empty(n, dtype=complex)
    block = max(1, 2_000_000 // max(n, 1))
    for j0 in range(0, n, block):
        j = np.arange(j0, min(n, j0 + block), dtype=np.int64)
        phase = roots[np.outer(j, t) % n]
        out[j0:j0 + len(j)] = np.sum(phase * f, axis=1)
    return out


def _is_smooth(n: int) -> bool:
    return n <= 2 or max(prime_factors(n)) <= SMOOTH_BOUND


def bluestein(f) -> np.ndarray:
    """Chirp-z evaluation of S[j] = sum_t f[t] e(jt/n) for arbitrary n.

    Uses jt = (j^2 + t^2 - (j - t)^2) / 2 to turn the transform into a
    linear convolution of length 2n - 1, done with power-of-two FFTs. The
    chirp argument m^2 is reduced mod 2n in exact integer arithmetic.
    """
    f = np.asarray(f, dtype=complex)
    n = len(f)
    m = np.arange(n, dtype=np.int64)
    chirp = np.exp(1j * np.pi * ((m * m) % (2 * n)) / n)
    size = 1 << int(2 * n - 2).bit_length()
    a = np.zeros(size, dtype=complex)
    a[:n] = f * chirp
    b = np.zeros(size, dtype=complex)
    b[:n] = np.conj(chirp)
    b[size - n + 1:] = np.conj(chirp[1:])[::-1]
    conv = np.fft.ifft(np.fft.fft(a) * np.fft.fft(b))
    return chirp * conv[:n]


def dft_fast(f) -> np.ndarray:
    """Fast S[j] = sum_t f[t] e(jt/n): mixed radix for smooth n, Bluestein otherwise."""
    f = np.asarray(f, dtype=complex)
    n = len(f)
    if n == 0:
        return f.copy()
    if _is_smooth(n):
        # sum f e(+jt/n) = conj(sum conj(f) e(-jt/n)), avoiding the 1/n of ifft
        return np.conj(np.fft.fft(np.conj(f)))
    return bluestein(f)


def tolerance_scale(f) -> float:
    f = np.asarray(f)
    return float(np.sqrt(len(f)) * np.max(np.abs(f))) if len(f) else 0.0


def dft(f, mode: str | None = None) -> np.ndarray:
    """Spectrum of ``f`` using the selected (or context-default) transform."""
    mode = mode or _mode.get()
    if mode == "fast":
        return dft_fast(f)
    if mode == "naive":
        return dft_naive(f)
    if mode == "verify-both":
        if len(f) > VERIFY_BOTH_MAX_N:
            raise ValueError(f"verify-both supports n <= {VERIFY_BOTH_MAX_N}, got {len(f)}")
        fast = dft_fast(f)
        slow = dft_naive(f)
        dev = float(np.max(np.abs(fast - slow))) if len(f) else 0.0
        if dev > 1e-8 * max(tolerance_scale(f), 1e-300):
            raise SpectralMismatch(f"fast/naive deviation {dev:.3e} at n={len(f)}")
        return fast
    raise ValueError(f"unknown fft mode {mode!r}")


def spectrum(ctx: PrimeContext, f, mode: str | None = None) -> Spectrum:
    """Spectrum of a group function given along the index table."""
    f = np.asarray(f)
    if len(f) != ctx.order:
        raise ValueError("group function must have length p - 1")
    if not np.all(np.isfinite(f)):
        raise ValueError("group function has non-finite entries")
    return Spectrum(ctx.p, dft(f, mode))
