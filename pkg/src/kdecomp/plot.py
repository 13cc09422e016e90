"""Deterministic SVG scatter plots of 2-coordinate projections."""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .codec import SCALE, TupleDataset

SIZE = 420
MARGIN = 40
PLOT = SIZE - 2 * MARGIN
RADIUS = 0.8


def _px(micros: np.ndarray) -> np.ndarray:
    # [-1, 1] -> [0, PLOT] in integer hundredths of a pixel
    return (micros.astype(np.int64) + SCALE) * (PLOT * 100) // (2 * SCALE)


def scatter_svg(points: TupleDataset, xlabel: str, ylabel: str, title: str = "") -> str:
    """Render a 2-column dataset on fixed [-1, 1] axes.

    Circles are emitted in row order and coordinates are rounded to
    hundredths of a pixel with integer arithmetic, so the output is a pure
    function of the data.
    """
    if points.n_cols != 2:
        raise ValueError("scatter plot needs exactly 2 columns")
    lo, hi = MARGIN, MARGIN + PLOT
    mid = MARGIN + PLOT // 2
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
        f'<rect x="{lo}" y="{lo}" width="{PLOT}" height="{PLOT}" fill="none" stroke="black"/>',
        f'<line x1="{lo}" y1="{mid}" x2="{hi}" y2="{mid}" stroke="#bbbbbb"/>',
        f'<line x1="{mid}" y1="{lo}" x2="{mid}" y2="{hi}" stroke="#bbbbbb"/>',
        f'<text x="{lo}" y="{hi + 16}" font-size="11" text-anchor="middle">-1</text>',
        f'<text x="{hi}" y="{hi + 16}" font-size="11" text-anchor="middle">1</text>',
        f'<text x="{lo - 6}" y="{hi}" font-size="11" text-anchor="end">-1</text>',
        f'<text x="{lo - 6}" y="{lo + 4}" font-size="11" text-anchor="end">1</text>',
        f'<text x="{mid}" y="{hi + 30}" font-size="13" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="{lo - 24}" y="{mid}" font-size="13" text-anchor="middle">{escape(ylabel)}</text>',
    ]
    if title:
        out.append(f'<text x="{mid}" y="{lo - 14}" font-size="13" text-anchor="middle">{escape(title)}</text>')
    out.append('<g fill="black" stroke="none">')
    xs = _px(points.micros[:, 0]) + lo * 100
    ys = hi * 100 - _px(points.micros[:, 1])
    for x, y in zip(xs.tolist(), ys.tolist()):
        out.append(f'<circle cx="{x // 100}.{x % 100:02d}" cy="{y // 100}.{y % 100:02d}" r="{RADIUS}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_scatter(points: TupleDataset, path: Path, xlabel: str, ylabel: str, title: str = "") -> Path:
    path = Path(path)
    path.write_text(scatter_svg(points, xlabel, ylabel, title), encoding="utf-8")
    return path
