"""CSV, JSON and SVG emitters for the command-line reports."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

MOMENT_COLUMNS = ["p", "kind", "kappa", "k", "l", "n", "re", "im", "predicted",
                  "abs_err", "rel_err", "bound_ratio", "wall_ms", "error"]
LVALUE_COLUMNS = ["p", "kind", "kappa", "k", "l", "n", "s", "re", "im", "predicted",
                  "abs_err", "rel_err", "bound_ratio", "wall_ms", "frak_s", "euler_gamma", "error"]
EQUIDIST_COLUMNS = ["p", "sample", "law", "statistic", "grid", "value", "count"]
HISTOGRAM_COLUMNS = ["bin_lo", "bin_hi", "empirical_mass", "target_mass"]
SCAN_COLUMNS = ["p", "count", "max_abs_K", "max_abs_normalized", "kappa", "moment_rel_err",
                "moment_bound_ratio", "ks_abs", "planar_discrepancy", "wall_ms"]


def fmt(value) -> str:
    """Shortest round-trip text for floats, plain text otherwise, '' for None."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        return repr(v)
    return str(value)


def to_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def _jsonable(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        value = float(value)
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def to_json(rows: list[dict], columns: list[str] | None = None) -> str:
    if columns is not None:
        rows = [{c: row.get(c) for c in columns} for row in rows]
    return json.dumps(_jsonable(rows), indent=1) + "\n"


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def histogram_svg(hist: np.ndarray, density_x: np.ndarray, density_y: np.ndarray, title: str = "") -> str:
    """Bar chart of empirical bin densities with the target density as a polyline.

    Fixed 800x500 viewBox; one rect per bin.
    """
    width, height, pad = 800, 500, 40
    lo, hi = float(hist[0, 0]), float(hist[-1, 1])
    widths = hist[:, 1] - hist[:, 0]
    emp = hist[:, 2] / widths
    finite = density_y[np.isfinite(density_y)]
    top = max(float(np.max(emp)), float(np.max(finite)) if len(finite) else 0.0) * 1.05 or 1.0

    def sx(x):
        return pad + (x - lo) / (hi - lo) * (width - 2 * pad)

    def sy(y):
        return height - pad - min(y, top) / top * (height - 2 * pad)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}" '
             f'width="{width}" height="{height}">',
             f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>']
    if title:
        parts.append(f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="16">{title}</text>')
    for (b0, b1, _, _), d in zip(hist, emp):
        x0, x1 = sx(b0), sx(b1)
        parts.append(f'<rect x="{x0:.2f}" y="{sy(d):.2f}" width="{x1 - x0:.2f}" '
                     f'height="{height - pad - sy(d):.2f}" fill="#9ecae1" stroke="#3182bd"/>')
    keep = np.isfinite(density_y)
    pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(density_x[keep], density_y[keep]))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="#de2d26" stroke-width="2"/>')
    parts.append(f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
