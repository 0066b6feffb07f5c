"""Minimal standalone SVG plots of the stable coefficient regions."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .bc import ellipse_boundary, ellipse_semi_axes

WIDTH = HEIGHT = 480
MARGIN = 48


def _ticks(lo: float, hi: float, n: int = 5) -> np.ndarray:
    step = (hi - lo) / n
    mag = 10.0 ** np.floor(np.log10(step))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= step), default=step)
    return np.arange(np.ceil(lo / step) * step, hi + 0.5 * step, step)


def region_svg(fr: float, kind: str, nsamples: int = 256) -> str:
    """SVG of the ``(gamma, theta)`` region that passes the energy test.

    The filled polygon lives in data coordinates under a single transform,
    so a reader can test membership directly against its vertices.
    """
    pts = ellipse_boundary(fr, kind, nsamples)
    a, b = ellipse_semi_axes(fr, kind)
    ext = 1.25 * max(a, b)
    scale = (WIDTH - 2 * MARGIN) / (2 * ext)
    cx, cy = WIDTH / 2, HEIGHT / 2

    def px(x):
        return cx + scale * x

    def py(y):
        return cy - scale * y

    poly = " ".join(f"{g:.17g},{t:.17g}" for g, t in pts)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f"<title>{escape(f'Stable region, subcritical {kind}, Fr = {fr:g}')}</title>",
        '<rect width="100%" height="100%" fill="white"/>',
        f'<g id="region" transform="translate({cx:g},{cy:g}) scale({scale:.17g},{-scale:.17g})">',
        f'<polygon id="stable-region" data-fr="{fr:.17g}" data-kind="{kind}" points="{poly}" '
        f'fill="#4f81bd" fill-opacity="0.35" stroke="#1f4e79" stroke-width="{1.5 / scale:.6g}"/>',
        "</g>",
        f'<line x1="{MARGIN}" y1="{cy:g}" x2="{WIDTH - MARGIN}" y2="{cy:g}" stroke="black"/>',
        f'<line x1="{cx:g}" y1="{MARGIN}" x2="{cx:g}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
    ]
    for t in _ticks(-ext, ext):
        if abs(t) < 1e-12:
            continue
        out.append(f'<line x1="{px(t):.2f}" y1="{cy - 3:g}" x2="{px(t):.2f}" y2="{cy + 3:g}" stroke="black"/>')
        out.append(f'<text x="{px(t):.2f}" y="{cy + 15:g}" text-anchor="middle">{t:g}</text>')
        out.append(f'<line x1="{cx - 3:g}" y1="{py(t):.2f}" x2="{cx + 3:g}" y2="{py(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{cx - 6:g}" y="{py(t) + 4:.2f}" text-anchor="end">{t:g}</text>')
    sub = "in" if kind == "inflow" else "out"
    out += [
        f'<text x="{WIDTH - MARGIN:g}" y="{cy - 8:g}" text-anchor="end">&#947;_{sub}</text>',
        f'<text x="{cx + 8:g}" y="{MARGIN:g}">&#952;_{sub}</text>',
        f'<text x="{WIDTH / 2:g}" y="20" text-anchor="middle" font-size="13">'
        f"subcritical {kind}, Fr = {fr:g}</text>",
        "</svg>",
    ]
    return "\n".join(out) + "\n"


def polygon_from_svg(text: str) -> np.ndarray:
    """Vertices of the ``stable-region`` polygon in an SVG written by :func:`region_svg`."""
    import xml.etree.ElementTree as ET

    root = ET.fromstring(text)
    for el in root.iter():
        if el.tag.endswith("polygon") and el.get("id") == "stable-region":
            pairs = [p.split(",") for p in el.get("points").split()]
            return np.array(pairs, dtype=float)
    raise ValueError("no stable-region polygon found")


def point_in_polygon(poly: np.ndarray, x: float, y: float) -> bool:
    """Even-odd ray casting test."""
    inside = False
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < xc:
                inside = not inside
    return inside
