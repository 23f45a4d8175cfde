import math

import numpy as np
import pytest

from kmoments import moments as mo
from kmoments.arith import mod_inv
from kmoments.special import central_ratio

from conftest import tables


def brute_moment(p, kappa, n):
    ctx, _, fam = tables(p)
    v = fam.values
    return sum(ctx.char(j, n) * abs(v[j]) ** (2 * kappa) for j in range(2, p - 1, 2))


def test_p7_kappa1():
    ctx, _, fam = tables(7)
    rep = mo.moment_abs(fam, ctx, 1.0, 1)
    assert abs(rep.computed - 24 / 7) < 1e-12
    assert abs(rep.predicted_main - 7) < 1e-12


@pytest.mark.parametrize("p", [5, 7, 11, 13, 101])
@pytest.mark.parametrize("kappa", [0.5, 1, 1.5, 3])
def test_moment_abs_matches_direct(p, kappa):
    ctx, _, fam = tables(p)
    for n in (1, 2, p - 1):
        rep = mo.moment_abs(fam, ctx, kappa, n)
        assert abs(rep.computed - brute_moment(p, kappa, n)) < 1e-9 * p
    if p > 5:
        assert mo.moment_abs(fam, ctx, kappa, 2).predicted_main == 0


def test_moment_abs_real_nonnegative_at_pm1(small):
    ctx, _, fam = small
    for n in (1, -1):
        z = complex(mo.moment_abs(fam, ctx, 1.3, n).computed)
        assert z.imag == 0 and z.real >= 0


def test_integer_kappa_same_path():
    ctx, _, fam = tables(101)
    a = mo.moment_abs(fam, ctx, 2, 1)
    b = mo.moment_abs(fam, ctx, 2.0, 1)
    assert a.computed == b.computed
    assert abs(a.predicted_main - central_ratio(2) * 101) < 1e-12 * 101


def test_bad_inputs():
    ctx, _, fam = tables(7)
    with pytest.raises(ValueError):
        mo.moment_abs(fam, ctx, 0, 1)
    with pytest.raises(ValueError):
        mo.moment_abs(fam, ctx, 1, 7)
    with pytest.raises(ValueError):
        mo.moment_mixed(fam, ctx, 0, 0, 1)


def brute_mixed(p, k, l, n):
    ctx, _, fam = tables(p)
    v = fam.values
    return sum(ctx.char(j, n) * np.conj(v[j]) ** k * v[j] ** l for j in range(2, p - 1, 2))


@pytest.mark.parametrize("k,l", [(1, 0), (2, 0), (2, 1), (3, 1), (2, 2), (0, 3)])
def test_mixed_matches_direct(k, l):
    for p in (11, 13, 101):
        ctx, _, fam = tables(p)
        for n in (1, 2, p - 1):
            rep = mo.moment_mixed(fam, ctx, k, l, n)
            assert abs(rep.computed - brute_mixed(p, k, l, n)) < 1e-9 * p
            if (k + l) % 2:
                assert rep.predicted_main == 0


def test_mixed_conjugate_symmetry():
    ctx, _, fam = tables(101)
    for k, l, n in [(2, 1, 3), (3, 1, 7), (1, 0, 5)]:
        a = mo.moment_mixed(fam, ctx, k, l, n).computed
        b = mo.moment_mixed(fam, ctx, l, k, mod_inv(n, 101)).computed
        assert abs(a - np.conj(b)) < 1e-9


def test_mixed_delta():
    assert mo.mixed_delta(7, 2, 0, 4) == 1
    assert mo.mixed_delta(7, 2, 0, 3) == 1
    assert mo.mixed_delta(7, 2, 0, 2) == 0
    assert mo.mixed_delta(13, 1, 1, 1) == 1


def test_mixed_diagonal_is_abs_moment():
    ctx, _, fam = tables(101)
    for k in (1, 2, 3):
        for n in (1, 5):
            a = mo.moment_mixed(fam, ctx, k, k, n)
            b = mo.moment_abs(fam, ctx, k, n)
            assert abs(a.computed - b.computed) < 1e-9 * 101
            assert abs(a.predicted_main - b.predicted_main) < 1e-9


def test_star_examples():
    ctx, gauss, fam = tables(5)
    assert abs(mo.moment_star(fam, gauss, ctx, 1).computed - 2 / math.sqrt(5)) < 1e-12
    assert abs(mo.moment_star(fam, gauss, ctx, 2).computed - 0.8) < 1e-12


def test_report_fields():
    ctx, _, fam = tables(101)
    rep = mo.moment_abs(fam, ctx, 1, 1)
    d = rep.to_dict()
    assert d["kind"] == "abs" and d["rel_err"] == rep.rel_err
    assert rep.bound_ratio == rep.abs_err / rep.envelope
    assert mo.moment_abs(fam, ctx, 1, 2).rel_err is None
