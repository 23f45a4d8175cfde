"""Limit laws for K(chi) over A(p) and empirical distances to them."""

from __future__ import annotations

from dataclasses import dataclass
import math
import warnings

import numpy as np

from .arith import PrimeContext
from .expsums import KFamily, normalized_real

SAMPLE_KINDS = ("abs", "sqrt-abs", "squared-abs", "normalized-real", "planar", "argument")


@dataclass(frozen=True)
class TargetLaw:
    name: str
    lo: float
    hi: float

    def cdf(self, x):
        return target_cdf(self, x)


LAWS = {
    "arcsine-abs": TargetLaw("arcsine-abs", 0.0, 2.0),
    "arcsine-sqrt": TargetLaw("arcsine-sqrt", 0.0, 1.0),
    "symmetric-arcsine": TargetLaw("symmetric-arcsine", -2.0, 2.0),
    "uniform-argument": TargetLaw("uniform-argument", -math.pi, math.pi),
}
# law each 1-D sample kind is tested against
DEFAULT_LAW = {
    "abs": "arcsine-abs",
    "sqrt-abs": "arcsine-sqrt",
    "normalized-real": "symmetric-arcsine",
    "squared-abs": "arcsine-sqrt",
    "argument": "uniform-argument",
}
# sample kind used for each law unless overridden
LAW_SAMPLE = {
    "arcsine-abs": "abs",
    "arcsine-sqrt": "sqrt-abs",
    "symmetric-arcsine": "normalized-real",
    "uniform-argument": "argument",
    "disk-mu": "planar",
}


class SupportWarning(UserWarning):
    """A CDF was evaluated outside the law's support and clamped."""


def get_law(law) -> TargetLaw:
    if isinstance(law, TargetLaw):
        return law
    try:
        return LAWS[law]
    except KeyError:
        raise ValueError(f"unknown law {law!r}; choose from {sorted(LAWS)}") from None


def target_cdf(law, x):
    """Closed-form CDF of a target law; arguments outside the support are clamped."""
    law = get_law(law)
    x = np.asarray(x, dtype=float)
    if np.any(x < law.lo) or np.any(x > law.hi):
        warnings.warn(f"{law.name}: argument clamped to [{law.lo}, {law.hi}]", SupportWarning, stacklevel=2)
    x = np.clip(x, law.lo, law.hi)
    if law.name == "arcsine-abs":
        out = 2 / np.pi * np.arcsin(x / 2)
    elif law.name == "arcsine-sqrt":
        out = 2 / np.pi * np.arcsin(np.sqrt(x))
    elif law.name == "symmetric-arcsine":
        out = (np.arcsin(x / 2) + np.pi / 2) / np.pi
    else:
        out = (x + np.pi) / (2 * np.pi)
    return out if out.ndim else float(out)


def target_density(law, x):
    """Density of a target law on the interior of its support."""
    law = get_law(law)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        if law.name == "arcsine-abs":
            return 2 / (np.pi * np.sqrt(4 - x * x))
        if law.name == "arcsine-sqrt":
            return 1 / (np.pi * np.sqrt(x * (1 - x)))
        if law.name == "symmetric-arcsine":
            return 1 / (np.pi * np.sqrt(4 - x * x))
        return np.full_like(x, 1 / (2 * np.pi))


def target_quantile(law, u):
    law = get_law(law)
    u = np.asarray(u, dtype=float)
    if law.name == "arcsine-abs":
        return 2 * np.sin(np.pi * u / 2)
    if law.name == "arcsine-sqrt":
        return np.sin(np.pi * u / 2) ** 2
    if law.name == "symmetric-arcsine":
        return 2 * np.sin(np.pi * u - np.pi / 2)
    return -np.pi + 2 * np.pi * u


@dataclass(frozen=True)
class EmpiricalSample:
    """Sorted 1-D sample, or an (m, 2) array of points for kind "planar"."""

    p: int
    kind: str
    data: np.ndarray

    @property
    def count(self) -> int:
        return len(self.data)


def family_values(family: KFamily) -> np.ndarray:
    """K(chi) over A(p) in increasing j."""
    return family.values[family.family_mask]


def make_sample(ctx: PrimeContext, family: KFamily, kind: str, tau: np.ndarray | None = None) -> EmpiricalSample:
    """Build a sample over A(p), of size (p - 3) / 2."""
    if kind not in SAMPLE_KINDS:
        raise ValueError(f"unknown sample kind {kind!r}")
    z = family_values(family)
    if kind == "abs":
        data = np.sort(np.abs(z))
    elif kind == "sqrt-abs":
        data = np.sort(np.sqrt(np.abs(z) / 2))
    elif kind == "squared-abs":
        data = np.sort((np.abs(z) / 2) ** 2)
    elif kind == "argument":
        data = np.sort(np.angle(z))
    elif kind == "normalized-real":
        if tau is None:
            raise ValueError("normalized-real needs the Gauss table")
        data = np.sort(normalized_real(ctx, family, tau).real)
    else:
        data = np.column_stack([z.real, z.imag])
    return EmpiricalSample(ctx.p, kind, data)


def ks_statistic(sample, law) -> float:
    """sup |F_n - F| over the order statistics of a sorted 1-D sample."""
    data = sample.data if isinstance(sample, EmpiricalSample) else np.asarray(sample, dtype=float)
    n = len(data)
    if n == 0:
        raise ValueError("empty sample")
    f = np.asarray(target_cdf(law, data))
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def sector_probability(angles, radii) -> float:
    """Limit mass of {arg z in I, |z| in J}: |I| / pi^2 * (arcsin(b/2) - arcsin(a/2))."""
    (t0, t1), (r0, r1) = angles, radii
    if not (-math.pi <= t0 <= t1 <= math.pi and 0 <= r0 <= r1 <= 2):
        raise ValueError("need I within [-pi, pi] and J within [0, 2]")
    return (t1 - t0) / math.pi ** 2 * (math.asin(r1 / 2) - math.asin(r0 / 2))


def disk_density(x, y):
    """Planar limit density 1 / (pi^2 r sqrt(4 - r^2)) on the open disk of radius 2."""
    r = np.hypot(x, y)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(r < 2, 1 / (np.pi ** 2 * r * np.sqrt(4 - r * r)), 0.0)


def planar_discrepancy(sample, grid: tuple[int, int] = (8, 8)) -> float:
    """Max over grid sectors of |empirical fraction - limit mass|.

    The angle range [-pi, pi] and radius range [0, 2] are cut into
    ``grid = (A, R)`` equal pieces; every product of a run of consecutive
    angular cells with a run of consecutive radial cells is a sector.
    """
    pts = sample.data if isinstance(sample, EmpiricalSample) else np.asarray(sample, dtype=float)
    na, nr = grid
    if na < 2 or nr < 2:
        raise ValueError("grid sizes must be >= 2")
    m = len(pts)
    theta = np.arctan2(pts[:, 1], pts[:, 0])
    r = np.hypot(pts[:, 0], pts[:, 1])
    tedges = np.linspace(-math.pi, math.pi, na + 1)
    redges = np.linspace(0.0, 2.0, nr + 1)
    ti = np.clip(np.searchsorted(tedges, theta, side="right") - 1, 0, na - 1)
    ri = np.clip(np.searchsorted(redges, r, side="right") - 1, 0, nr - 1)
    counts = np.zeros((na, nr))
    np.add.at(counts, (ti, ri), 1.0)
    cum = np.zeros((na + 1, nr + 1))
    cum[1:, 1:] = counts.cumsum(0).cumsum(1)
    worst = 0.0
    for a0 in range(na):
        for a1 in range(a0 + 1, na + 1):
            for b0 in range(nr):
                for b1 in range(b0 + 1, nr + 1):
                    inside = cum[a1, b1] - cum[a0, b1] - cum[a1, b0] + cum[a0, b0]
                    mass = sector_probability((tedges[a0], tedges[a1]), (redges[b0], redges[b1]))
                    worst = max(worst, abs(inside / m - mass))
    return worst


def histogram(sample: EmpiricalSample, law, bins: int = 40) -> np.ndarray:
    """Rows (bin_lo, bin_hi, empirical_mass, target_mass) over the law's support."""
    law = get_law(law)
    edges = np.linspace(law.lo, law.hi, bins + 1)
    counts, _ = np.histogram(np.clip(sample.data, law.lo, law.hi), bins=edges)
    cdf = np.asarray(target_cdf(law, edges))
    return np.column_stack([edges[:-1], edges[1:], counts / sample.count, np.diff(cdf)])


def disk_total_mass(n_theta: int = 1000, n_r: int = 1000) -> float:
    """Midpoint quadrature of the planar density over the disk.

    Polar grid with r = 2 sin(u): the Cartesian density times the Jacobians
    r and dr/du = 2 cos(u) is bounded, so the midpoint rule is accurate.
    """
    theta = -math.pi + (np.arange(n_theta) + 0.5) * (2 * math.pi / n_theta)
    u = (np.arange(n_r) + 0.5) * (math.pi / 2 / n_r)
    tt, uu = np.meshgrid(theta, u, indexing="ij")
    rr = 2 * np.sin(uu)
    dens = disk_density(rr * np.cos(tt), rr * np.sin(tt))
    weight = dens * rr * 2 * np.cos(uu)
    return float(np.sum(weight) * (2 * math.pi / n_theta) * (math.pi / 2 / n_r))
