"""
Writers for run artefacts: CSV tables, SVG and PNG curve plots, JSON summaries.

Floats go to CSV with 17 significant digits so that values read back
exactly. SVG files hold one ``<polyline>`` per continuous curve piece in
the ``(κ, χ)`` plane, with ``χ`` increasing downwards like the column
index of the graph.
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path
from typing import Iterable, List, Mapping, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .frozen import ParametricCurve

logger = logging.getLogger(__name__)

Polyline = List[Tuple[float, float]]

SVG_SIZE = 600
SVG_MARGIN = 30
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def fmt(value) -> str:
    if isinstance(value, (int, str)) and not isinstance(value, bool):
        return str(value)
    return format(float(value), ".17g")


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    logger.info("wrote %s", path)
    return path


def read_csv(path: str | Path) -> Tuple[List[str], List[List[str]]]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def write_json(path: str | Path, data: Mapping) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info("wrote %s", path)
    return path


CURVE_HEADER = ("u", "chi", "kappa", "branch", "segment")


def curve_rows(curve: ParametricCurve) -> List[Tuple]:
    return [(s.u, s.chi, s.kappa, s.branch, s.segment) for s in curve.samples]


def polylines(curve: ParametricCurve, box: Tuple[float, float, float, float] | None = None) -> List[Tuple[int, Polyline]]:
    """Continuous pieces as ``(branch, [(κ, χ), ...])``, clipped to ``box``."""
    out = []
    for branch, samples in curve.pieces():
        pts = [(s.kappa, s.chi) for s in samples]
        if box is not None:
            k0, k1, c0, c1 = box
            pts = [(k, c) for k, c in pts if k0 <= k <= k1 and c0 <= c <= c1]
        if len(pts) >= 2:
            out.append((branch, pts))
    return out


def _bounds(
    lines: Sequence[Tuple[int, Polyline]], chi_range: Tuple[float, float] | None = None
) -> Tuple[float, float, float, float]:
    ks = [k for _, pts in lines for k, _ in pts]
    k0, k1 = min(ks), max(ks)
    if chi_range is None:
        cs = [c for _, pts in lines for _, c in pts]
        chi_range = (min(cs), max(cs))
    c0, c1 = chi_range
    return k0, max(k1, k0 + 1e-12), c0, max(c1, c0 + 1e-12)


def write_svg(
    path: str | Path,
    lines: Sequence[Tuple[int, Polyline]],
    title: str = "",
    chi_range: Tuple[float, float] | None = None,
) -> Path:
    """One polyline per piece inside the box ``[κ_min, κ_max] × chi_range``.

    ``chi_range`` defaults to the data range; curve plots pass ``(V_0, V_m)``.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    inner = SVG_SIZE - 2 * SVG_MARGIN
    body = [
        f'<rect x="{SVG_MARGIN}" y="{SVG_MARGIN}" width="{inner}" height="{inner}" fill="none" stroke="black"/>'
    ]
    if lines:
        k0, k1, c0, c1 = _bounds(lines, chi_range)
        for branch, pts in lines:
            coords = " ".join(
                f"{SVG_MARGIN + inner * (k - k0) / (k1 - k0):.3f},{SVG_MARGIN + inner * (c - c0) / (c1 - c0):.3f}"
                for k, c in pts
            )
            color = COLORS[branch % len(COLORS)]
            body.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        body.append(
            f'<text x="{SVG_MARGIN}" y="{SVG_SIZE - 8}" font-size="11">'
            f"κ ∈ [{k0:.4g}, {k1:.4g}], χ ∈ [{c0:.4g}, {c1:.4g}]</text>"
        )
    if title:
        body.append(f'<text x="{SVG_MARGIN}" y="{SVG_MARGIN - 8}" font-size="14">{title}</text>')
    doc = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_SIZE}" height="{SVG_SIZE}"'
        f' viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">\n'
        + "\n".join(body)
        + "\n</svg>\n"
    )
    path.write_text(doc, encoding="utf-8")
    logger.info("wrote %s (%d polylines)", path, len(lines))
    return path


def write_png(
    path: str | Path,
    lines: Sequence[Tuple[int, Polyline]],
    title: str = "",
    chi_range: Tuple[float, float] | None = None,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6, 6))
    for branch, pts in lines:
        ks, cs = zip(*pts)
        ax.plot(ks, cs, color=COLORS[branch % len(COLORS)], lw=1.2)
    if chi_range is not None:
        ax.set_ylim(*chi_range)
    ax.invert_yaxis()
    ax.set_xlabel(r"$\kappa$")
    ax.set_ylabel(r"$\chi$")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=300)
    plt.close(fig)
    logger.info("wrote %s", path)
    return path


def write_density_png(path: str | Path, kappa: Sequence[float], values: Sequence[float], title: str = "") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(kappa, values)
    ax.set_xlabel(r"$\kappa$")
    ax.set_ylabel("density")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=300)
    plt.close(fig)
    logger.info("wrote %s", path)
    return path
