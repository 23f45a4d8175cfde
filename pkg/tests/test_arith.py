import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy import isprime, n_order

from kmoments.arith import build_context, is_prime, mod_inv, primes_in_range, primitive_root


@pytest.mark.parametrize("n,expected", [(2, True), (10007, True), (10001, False), (1, False), (561, False)])
def test_is_prime_examples(n, expected):
    assert is_prime(n) is expected


def test_is_prime_matches_sympy_below_20000():
    got = [n for n in range(20000) if is_prime(n)]
    assert got == [n for n in range(20000) if isprime(n)]


@given(st.integers(min_value=2, max_value=2**64 - 1))
def test_is_prime_large(n):
    assert is_prime(n) == isprime(n)


def test_strong_pseudoprimes_rejected():
    # strong pseudoprimes to several small bases
    for n in (3215031751, 2152302898747, 3474749660383, 341550071728321, 3825123056546413051):
        assert not is_prime(n)


def test_context_p5():
    ctx = build_context(5)
    assert ctx.g == 2
    assert [ctx.ind[a] for a in (1, 2, 3, 4)] == [0, 1, 3, 2]
    assert ctx.eps == 1


def test_context_p7():
    ctx = build_context(7)
    assert ctx.g == 3
    assert ctx.ind[6] == 3
    assert ctx.eps == 1j


@pytest.mark.parametrize("p", [3, 5, 7, 101, 1009, 10007])
def test_context_tables(p):
    ctx = build_context(p)
    assert n_order(ctx.g, p) == p - 1
    t = np.arange(p - 1)
    assert np.array_equal(ctx.ind[ctx.pow[t]], t)
    squares = {a * a % p for a in range(1, p)}
    assert all(ctx.legendre[a] == (1 if a in squares else -1) for a in range(1, p))
    assert ctx.legendre[0] == 0


@pytest.mark.parametrize("bad", [1, 2, 4, 9, 10001])
def test_context_rejects_non_odd_primes(bad):
    with pytest.raises(ValueError):
        build_context(bad)


@pytest.mark.parametrize("a,p,inv", [(1, 13, 1), (2, 5, 3), (4, 7, 2)])
def test_mod_inv_examples(a, p, inv):
    assert mod_inv(a, p) == inv


@given(st.integers(min_value=1, max_value=10006))
def test_mod_inv_involution(a):
    assert mod_inv(mod_inv(a, 10007), 10007) == a
    assert a * mod_inv(a, 10007) % 10007 == 1


def test_mod_inv_zero():
    with pytest.raises(ValueError):
        mod_inv(0, 7)


def test_characters_are_homomorphisms():
    ctx = build_context(31)
    for j in (1, 5, 15):
        for a, b in [(2, 3), (7, 11), (30, 30)]:
            assert abs(ctx.char(j, a * b % 31) - ctx.char(j, a) * ctx.char(j, b)) < 1e-12
    row = ctx.char_row(30)
    assert np.allclose(row, (-1.0) ** np.arange(30))


def test_primes_in_range():
    assert primes_in_range(1, 30) == [3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primitive_root(7) == 3
