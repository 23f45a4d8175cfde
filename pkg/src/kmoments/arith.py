"""Arithmetic modulo an odd prime: primality, primitive roots, index tables."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Deterministic for n < 3.3e24, which covers every 64-bit input.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin test, exact for all n < 2**64."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n by trial division, ascending."""
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out.append(n)
    return out


def primitive_root(p: int) -> int:
    """Smallest primitive root of the prime p."""
    if p == 2:
        return 1
    qs = prime_factors(p - 1)
    g = 2
    while True:
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
        g += 1


def mod_inv(a: int, p: int) -> int:
    """Inverse of a modulo p. Raises ValueError when a is divisible by p."""
    if a % p == 0:
        raise ValueError(f"{a} is not invertible mod {p}")
    return pow(a, -1, p)


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Odd primes in the closed interval [lo, hi]."""
    return [n for n in range(max(lo, 3), hi + 1) if is_prime(n)]


@dataclass(frozen=True, eq=False)
class PrimeContext:
    """Read-only arithmetic tables for one odd prime.

    Attributes
    ----------
    p : int
        The prime modulus.
    g : int
        Smallest primitive root of ``p``.
    ind : ndarray of int64, length p
        ``ind[a]`` is the discrete log of ``a`` to base ``g``; ``ind[0]`` is -1.
    pow : ndarray of int64, length p - 1
        ``pow[t] = g**t mod p``.
    legendre : ndarray of int8, length p
        Quadratic character, with ``legendre[0] == 0``.
    eps : complex
        1 when p = 1 mod 4 and 1j when p = 3 mod 4.
    """

    p: int
    g: int
    ind: np.ndarray = field(repr=False)
    pow: np.ndarray = field(repr=False)
    legendre: np.ndarray = field(repr=False)
    eps: complex

    @property
    def order(self) -> int:
        return self.p - 1

    @property
    def half(self) -> int:
        """Index of the quadratic character, (p - 1) / 2."""
        return (self.p - 1) // 2

    def char(self, j: int, a: int) -> complex:
        """Value of the character eta**j at the residue a."""
        a %= self.p
        if a == 0:
            return 0j
        t = (j * int(self.ind[a])) % self.order
        return complex(np.exp(2j * np.pi * t / self.order))

    def char_row(self, a: int) -> np.ndarray:
        """Vector of chi_j(a) over all j in [0, p-2]."""
        a %= self.p
        if a == 0:
            return np.zeros(self.order, dtype=complex)
        t = (np.arange(self.order, dtype=np.int64) * int(self.ind[a])) % self.order
        return np.exp(2j * np.pi * t / self.order)


def build_context(p: int) -> PrimeContext:
    """Build the tables for the odd prime ``p``.

    The index table comes from one pass of repeated multiplication by the
    primitive root.
    """
    if not isinstance(p, (int, np.integer)) or p < 3 or p % 2 == 0 or not is_prime(int(p)):
        raise ValueError(f"expected an odd prime, got {p!r}")
    p = int(p)
    g = primitive_root(p)
    seq = [1] * (p - 1)
    x = 1
    for t in range(1, p - 1):
        x = x * g % p
        seq[t] = x
    powers = np.array(seq, dtype=np.int64)
    ind = np.full(p, -1, dtype=np.int64)
    ind[powers] = np.arange(p - 1, dtype=np.int64)
    legendre = np.zeros(p, dtype=np.int8)
    legendre[powers[0::2]] = 1
    legendre[powers[1::2]] = -1
    for arr in (powers, ind, legendre):
        arr.setflags(write=False)
    eps = 1 + 0j if p % 4 == 1 else 1j
    return PrimeContext(p=p, g=g, ind=ind, pow=powers, legendre=legendre, eps=eps)
