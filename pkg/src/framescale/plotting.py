"""Standalone SVG diagrams of R^2 frames before and after scaling.

Output is a pure function of the input arrays: fixed canvas, fixed number
formatting, no timestamps, so the same data always produces the same bytes.
"""
from __future__ import annotations

import math

import numpy as np

from .experiments import R2FigureData

SIZE = 400
RADIUS = 160.0
ORIGINAL_COLOR = "#1f77b4"
SCALED_COLOR = "#d62728"


def _xy(v) -> tuple[float, float]:
    # SVG y axis points down
    return SIZE / 2 + RADIUS * float(v[0]), SIZE / 2 - RADIUS * float(v[1])


def _f(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _segment(v, color: str, cls: str) -> str:
    x, y = _xy(v)
    return (f'<line class="{cls}" x1="{_f(SIZE / 2)}" y1="{_f(SIZE / 2)}" '
            f'x2="{_f(x)}" y2="{_f(y)}" stroke="{color}" stroke-width="1.5"/>')


def _circle_tip(v) -> str:
    x, y = _xy(v)
    return (f'<circle class="original-tip" cx="{_f(x)}" cy="{_f(y)}" r="4" '
            f'fill="none" stroke="{ORIGINAL_COLOR}" stroke-width="1.5"/>')


def _triangle_tip(v) -> str:
    x, y = _xy(v)
    ang = math.atan2(-float(v[1]), float(v[0]))
    pts = []
    for offset in (0.0, 2.0944, -2.0944):
        pts.append(f"{_f(x + 6 * math.cos(ang + offset))},{_f(y + 6 * math.sin(ang + offset))}")
    return (f'<polygon class="scaled-tip" points="{" ".join(pts)}" '
            f'fill="{SCALED_COLOR}" stroke="{SCALED_COLOR}"/>')


def render_r2_svg(data: R2FigureData, title: str = "") -> str:
    c = SIZE / 2
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
        f'<circle class="unit-circle" cx="{_f(c)}" cy="{_f(c)}" r="{_f(RADIUS)}" '
        'fill="none" stroke="#999999" stroke-dasharray="4 3"/>',
        f'<line x1="{_f(c - RADIUS - 10)}" y1="{_f(c)}" x2="{_f(c + RADIUS + 10)}" y2="{_f(c)}" '
        'stroke="#dddddd"/>',
        f'<line x1="{_f(c)}" y1="{_f(c - RADIUS - 10)}" x2="{_f(c)}" y2="{_f(c + RADIUS + 10)}" '
        'stroke="#dddddd"/>',
    ]
    if title:
        out.append(f'<text x="{_f(c)}" y="16" text-anchor="middle" font-family="sans-serif" '
                   f'font-size="12">{title}</text>')
    out.append('<g id="original">')
    for v in np.asarray(data.original):
        out.append(_segment(v, ORIGINAL_COLOR, "original"))
        out.append(_circle_tip(v))
    out.append("</g>")
    out.append('<g id="scaled">')
    for v in np.asarray(data.scaled):
        out.append(_segment(v, SCALED_COLOR, "scaled"))
        out.append(_triangle_tip(v))
    out.append("</g>")
    out.extend([
        '<g id="legend" font-family="sans-serif" font-size="11">',
        f'<circle cx="14" cy="{SIZE - 34}" r="4" fill="none" stroke="{ORIGINAL_COLOR}"/>',
        f'<text x="24" y="{SIZE - 30}">original frame</text>',
        f'<polygon points="10,{SIZE - 10} 18,{SIZE - 10} 14,{SIZE - 18}" fill="{SCALED_COLOR}"/>',
        f'<text x="24" y="{SIZE - 10}">scaled frame</text>',
        "</g>",
        "</svg>",
    ])
    return "\n".join(out) + "\n"
