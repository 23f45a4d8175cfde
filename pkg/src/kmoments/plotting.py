"""Matplotlib figures written next to the CSV reports."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .equidist import get_law, sector_probability, target_density  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.titlesize": 11,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
}


def figure_size(width=6.0, height=None):
    golden = (math.sqrt(5) - 1) / 2
    return (width, height or width * golden)


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, bbox_inches="tight", metadata={"Software": None})
    plt.close(fig)
    return path


def plot_histogram(hist: np.ndarray, law, path: Path, title: str = "") -> Path:
    """Empirical bin densities with the limit density overlaid."""
    law = get_law(law)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figure_size())
        widths = hist[:, 1] - hist[:, 0]
        ax.bar(hist[:, 0], hist[:, 2] / widths, width=widths, align="edge",
               color="#9ecae1", edgecolor="#3182bd", linewidth=0.5, label="empirical")
        span = law.hi - law.lo
        x = np.linspace(law.lo + 1e-3 * span, law.hi - 1e-3 * span, 600)
        ax.plot(x, target_density(law, x), color="#de2d26", lw=1.5, label=law.name)
        top = np.max(hist[:, 2] / widths)
        ax.set_ylim(0, 1.6 * top)
        ax.set_xlabel("value")
        ax.set_ylabel("density")
        ax.set_title(title)
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_planar(points: np.ndarray, path: Path, grid=(8, 8), title: str = "") -> Path:
    """Scatter of K(chi) in the disk of radius 2, with the sector grid."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.5, 5.5))
        ax.scatter(points[:, 0], points[:, 1], s=1.5, alpha=0.5, color="#08519c", lw=0)
        na, nr = grid
        t = np.linspace(-math.pi, math.pi, 400)
        for r in np.linspace(0, 2, nr + 1)[1:]:
            ax.plot(r * np.cos(t), r * np.sin(t), color="0.6", lw=0.5)
        for a in np.linspace(-math.pi, math.pi, na + 1):
            ax.plot([0, 2 * math.cos(a)], [0, 2 * math.sin(a)], color="0.6", lw=0.5)
        ax.set_aspect("equal")
        ax.set_xlim(-2.1, 2.1)
        ax.set_ylim(-2.1, 2.1)
        ax.set_title(title)
        return _save(fig, path)


def plot_sector_masses(points: np.ndarray, path: Path, grid=(8, 8), title: str = "") -> Path:
    """Empirical minus limit mass for every single grid cell."""
    na, nr = grid
    theta = np.arctan2(points[:, 1], points[:, 0])
    r = np.hypot(points[:, 0], points[:, 1])
    tedges = np.linspace(-math.pi, math.pi, na + 1)
    redges = np.linspace(0, 2, nr + 1)
    counts, _, _ = np.histogram2d(theta, np.minimum(r, 2), bins=[tedges, redges])
    mass = np.array([[sector_probability((tedges[i], tedges[i + 1]), (redges[j], redges[j + 1]))
                      for j in range(nr)] for i in range(na)])
    diff = counts / len(points) - mass
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figure_size())
        lim = float(np.max(np.abs(diff))) or 1.0
        im = ax.pcolormesh(redges, tedges, diff, cmap="RdBu_r", vmin=-lim, vmax=lim)
        fig.colorbar(im, ax=ax, label="empirical - limit mass")
        ax.set_xlabel("|K|")
        ax.set_ylabel("arg K")
        ax.set_title(title)
        return _save(fig, path)


def plot_moment_ladder(rows: list[dict], path: Path, title: str = "") -> Path:
    """Relative error against p, one line per (kind, parameters) series."""
    series: dict[str, list[tuple[int, float]]] = {}
    for row in rows:
        if row.get("rel_err") in (None, "") or row.get("error"):
            continue
        label = row["kind"]
        for key in ("kappa", "k", "l", "n"):
            if row.get(key) not in (None, ""):
                label += f" {key}={row[key]}"
        series.setdefault(label, []).append((row["p"], row["rel_err"]))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figure_size())
        for label, pts in sorted(series.items()):
            pts.sort()
            ax.loglog([q for q, _ in pts], [max(e, 1e-16) for _, e in pts], marker="o", ms=3, label=label)
        ax.set_xlabel("p")
        ax.set_ylabel("relative error to main term")
        ax.set_title(title)
        if series:
            ax.legend(frameon=False)
        return _save(fig, path)
