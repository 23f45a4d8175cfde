import math
import warnings

import numpy as np
import pytest
from scipy import stats

from kmoments import equidist as eq

from conftest import tables


def test_cdf_examples():
    assert eq.target_cdf("arcsine-abs", 0) == 0
    assert eq.target_cdf("arcsine-abs", 2) == 1
    assert abs(eq.target_cdf("arcsine-abs", math.sqrt(2)) - 0.5) < 1e-15
    assert abs(eq.target_cdf("arcsine-sqrt", 0.5) - 0.5) < 1e-15
    assert abs(eq.target_cdf("symmetric-arcsine", 0) - 0.5) < 1e-15


@pytest.mark.parametrize("name", list(eq.LAWS))
def test_cdf_invariants(name):
    law = eq.LAWS[name]
    x = np.linspace(law.lo, law.hi, 10_000)
    f = eq.target_cdf(law, x)
    assert f[0] == 0 and abs(f[-1] - 1) < 1e-15 and np.all(np.diff(f) >= 0)
    u = np.linspace(0.01, 0.99, 50)
    assert np.allclose(eq.target_cdf(law, eq.target_quantile(law, u)), u)
    mid = np.linspace(law.lo, law.hi, 2001)[1:-1]
    dens = eq.target_density(law, mid)
    assert abs(np.trapezoid(dens, mid) - (f[-1] - f[0])) < 0.05


def test_cdf_clamps_with_warning():
    with pytest.warns(eq.SupportWarning):
        assert eq.target_cdf("arcsine-abs", 2.5) == 1
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        eq.target_cdf("arcsine-abs", 1.0)


def test_ks_examples():
    n = 200
    law = eq.get_law("arcsine-abs")
    sample = eq.target_quantile(law, (np.arange(1, n + 1) - 0.5) / n)
    assert abs(eq.ks_statistic(sample, law) - 1 / (2 * n)) < 1e-12
    assert abs(eq.ks_statistic([math.sqrt(2)], law) - 0.5) < 1e-12


def test_ks_matches_scipy():
    rng = np.random.default_rng(3)
    data = np.sort(rng.uniform(0, 2, 500))
    ours = eq.ks_statistic(data, "arcsine-abs")
    ref = stats.kstest(data, lambda x: eq.target_cdf("arcsine-abs", np.clip(x, 0, 2))).statistic
    assert abs(ours - ref) < 1e-12


def test_sector_probability():
    assert abs(eq.sector_probability((-math.pi, math.pi), (0, 2)) - 1) < 1e-15
    assert abs(eq.sector_probability((0, math.pi), (0, 2)) - 0.5) < 1e-15
    assert abs(eq.sector_probability((-math.pi, math.pi), (0, math.sqrt(2))) - 0.5) < 1e-15
    with pytest.raises(ValueError):
        eq.sector_probability((0, 4), (0, 2))


def test_disk_mass():
    assert abs(eq.disk_total_mass(1000, 1000) - 1) < 1e-4


def test_planar_discrepancy_constructed_sample():
    # one point at the centre (in measure) of each cell of a 4x4 partition, 25 points per cell
    na, nr, per = 4, 4, 25
    pts = []
    for a in range(na):
        for b in range(nr):
            t0 = -math.pi + 2 * math.pi * a / na
            r0, r1 = 2 * b / nr, 2 * (b + 1) / nr
            mass = eq.sector_probability((t0, t0 + 2 * math.pi / na), (r0, r1))
            for i in range(round(per * 16 * mass)):
                u = (i + 0.5) / round(per * 16 * mass)
                r = 2 * math.sin(math.asin(r0 / 2) + u * (math.asin(r1 / 2) - math.asin(r0 / 2)))
                th = t0 + math.pi / na
                pts.append((r * math.cos(th), r * math.sin(th)))
    pts = np.array(pts)
    d = eq.planar_discrepancy(pts, (4, 4))
    assert d <= 1 / len(pts) + 16 * 0.5 / len(pts)


def test_samples_and_histogram():
    ctx, gauss, fam = tables(101)
    for kind in eq.SAMPLE_KINDS:
        s = eq.make_sample(ctx, fam, kind, gauss.values)
        assert s.count == (101 - 3) // 2
    s = eq.make_sample(ctx, fam, "abs")
    assert np.all(np.diff(s.data) >= 0) and s.data.max() <= 2 + 1e-9
    h = eq.histogram(s, "arcsine-abs", 20)
    assert h.shape == (20, 4)
    assert abs(h[:, 2].sum() - 1) < 1e-12 and abs(h[:, 3].sum() - 1) < 1e-12
    with pytest.raises(ValueError):
        eq.make_sample(ctx, fam, "normalized-real")


def test_normalized_real_in_range():
    ctx, gauss, fam = tables(1009)
    s = eq.make_sample(ctx, fam, "normalized-real", gauss.values)
    assert np.all(np.abs(s.data) <= 2 + 1e-9)
