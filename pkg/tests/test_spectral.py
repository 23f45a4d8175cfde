import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kmoments.arith import build_context
from kmoments.spectral import (SpectralMismatch, bluestein, dft, dft_fast, dft_naive, get_mode, on_group,
                               spectrum, tolerance_scale, use_mode)


def reference(f):
    n = len(f)
    t = np.arange(n)
    return np.exp(2j * np.pi * np.outer(t, t) / n) @ f


@pytest.mark.parametrize("n", [4, 6, 10, 12, 16, 22, 28, 100, 1008])
def test_naive_matches_matrix(n):
    f = np.random.default_rng(n).standard_normal(n) + 1j
    assert np.max(np.abs(dft_naive(f) - reference(f))) < 1e-9 * tolerance_scale(f)


@pytest.mark.parametrize("p", [5, 7, 13, 23, 47, 59, 83, 107, 1009, 2003])
def test_fast_matches_naive(p):
    rng = np.random.default_rng(p)
    f = rng.standard_normal(p - 1) + 1j * rng.standard_normal(p - 1)
    assert np.max(np.abs(dft_fast(f) - dft_naive(f))) <= 1e-8 * tolerance_scale(f)


def test_bluestein_on_smooth_length_too():
    f = np.random.default_rng(0).standard_normal(360).astype(complex)
    assert np.allclose(bluestein(f), dft_naive(f), atol=1e-9)


def test_constant_and_delta():
    ctx = build_context(11)
    one = on_group(ctx, np.ones(11))
    s = dft(one)
    assert abs(s[0] - 10) < 1e-12 and np.max(np.abs(s[1:])) < 1e-12
    delta = np.zeros(10)
    delta[0] = 1
    assert np.allclose(dft(delta), 1)


def test_additive_character_gives_gauss_sum_p5():
    ctx = build_context(5)
    f = np.exp(2j * np.pi * np.arange(5) / 5)
    s = spectrum(ctx, on_group(ctx, f))
    assert abs(s[2] - np.sqrt(5)) < 1e-12


def test_parseval_10007():
    rng = np.random.default_rng(7)
    f = rng.standard_normal(10006) + 1j * rng.standard_normal(10006)
    s = dft_fast(f)
    lhs = np.sum(np.abs(s) ** 2)
    rhs = 10006 * np.sum(np.abs(f) ** 2)
    assert abs(lhs - rhs) / rhs <= 1e-9


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=64))
def test_real_input_conjugate_symmetry(xs):
    f = np.array(xs)
    s = dft_fast(f)
    n = len(f)
    assert np.allclose(s[(-np.arange(n)) % n], np.conj(s), atol=1e-9 * tolerance_scale(f))


def test_modes():
    assert get_mode() == "fast"
    with use_mode("verify-both"):
        assert get_mode() == "verify-both"
        dft(np.ones(12))
        with pytest.raises(ValueError):
            dft(np.ones(3000))
    with pytest.raises(ValueError):
        with use_mode("bogus"):
            pass


def test_verify_both_flags_mismatch(monkeypatch):
    import kmoments.spectral as sp
    monkeypatch.setattr(sp, "dft_fast", lambda f: sp.dft_naive(f) + 1.0)
    with pytest.raises(SpectralMismatch):
        sp.dft(np.ones(10), mode="verify-both")
