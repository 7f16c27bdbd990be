"""Standalone SVG heatmaps of two-dimensional sweep results."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .config import PARAMETERS, display_unit
from .errors import ConfigError

PLOT_SIZE = 600.0
MARGIN_LEFT = 90.0
MARGIN_TOP = 40.0
MARGIN_BOTTOM = 70.0
LEGEND_WIDTH = 110.0
HATCH_COLOR = "#bdbdbd"

# viridis, sampled at five evenly spaced stops
_STOPS = ((68, 1, 84), (59, 82, 139), (33, 145, 140), (94, 201, 98), (253, 231, 37))


def color(t):
    """Hex colour for ``t`` in [0, 1] on a linear viridis-like scale."""
    t = min(max(t, 0.0), 1.0)
    pos = t * (len(_STOPS) - 1)
    k = min(int(pos), len(_STOPS) - 2)
    frac = pos - k
    lo, hi = _STOPS[k], _STOPS[k + 1]
    rgb = [round(a + (b - a) * frac) for a, b in zip(lo, hi)]
    return "#%02x%02x%02x" % tuple(rgb)


def _num(x):
    return format(x, ".6g")


def _axis_label(param):
    unit, _ = display_unit(param)
    if PARAMETERS[param][0] != 1.0:
        return f"{param} / 2π ({unit})"
    return f"{param} ({unit})"


def _display(param, value):
    _, divisor = display_unit(param)
    return value / divisor


def render_heatmap(grid, column):
    """Render ``column`` of a 2D :class:`~excitonopt.sweep.GridResult` as SVG.

    NaN cells (unstable or failed points) are drawn with a hatch pattern.
    """
    if len(grid.axes) != 2:
        raise ConfigError(
            "heatmaps need a 2D sweep; for 1D sweeps plot the CSV columns as lines")
    if column not in grid.header() or column == "status":
        raise ConfigError(f"unknown numeric column {column!r}")
    ax1, ax2 = grid.axes
    n1, n2 = ax1.points, ax2.points
    values = grid.column(column).reshape(n1, n2)
    finite = values[np.isfinite(values)]
    vmin = float(finite.min()) if finite.size else 0.0
    vmax = float(finite.max()) if finite.size else 0.0
    span = vmax - vmin

    cw = PLOT_SIZE / n1
    ch = PLOT_SIZE / n2
    width = MARGIN_LEFT + PLOT_SIZE + LEGEND_WIDTH
    height = MARGIN_TOP + PLOT_SIZE + MARGIN_BOTTOM
    x0, y0 = MARGIN_LEFT, MARGIN_TOP

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(width)}" '
        f'height="{_num(height)}" viewBox="0 0 {_num(width)} {_num(height)}" '
        'font-family="sans-serif" font-size="12">',
        "<defs>",
        '<pattern id="hatch" patternUnits="userSpaceOnUse" width="6" height="6">',
        f'<rect width="6" height="6" fill="#ffffff"/>',
        f'<path d="M0,6 L6,0" stroke="{HATCH_COLOR}" stroke-width="1"/>',
        "</pattern>",
        "</defs>",
        f"<title>{escape(column)}</title>",
        '<g id="cells" shape-rendering="crispEdges">',
    ]
    for i in range(n1):
        for j in range(n2):
            v = values[i, j]
            if math.isfinite(v):
                fill = color((v - vmin) / span) if span > 0 else color(0.0)
            else:
                fill = "url(#hatch)"
            # second axis increases upwards
            x = x0 + i * cw
            y = y0 + (n2 - 1 - j) * ch
            out.append(f'<rect x="{_num(x)}" y="{_num(y)}" width="{_num(cw)}" '
                       f'height="{_num(ch)}" fill="{fill}"/>')
    out.append("</g>")

    out.append(f'<rect x="{_num(x0)}" y="{_num(y0)}" width="{_num(PLOT_SIZE)}" '
               f'height="{_num(PLOT_SIZE)}" fill="none" stroke="#000000"/>')
    for frac in (0.0, 0.5, 1.0):
        vx = ax1.min + frac * (ax1.max - ax1.min)
        vy = ax2.min + frac * (ax2.max - ax2.min)
        px = x0 + frac * PLOT_SIZE
        py = y0 + (1.0 - frac) * PLOT_SIZE
        out.append(f'<line x1="{_num(px)}" y1="{_num(y0 + PLOT_SIZE)}" x2="{_num(px)}" '
                   f'y2="{_num(y0 + PLOT_SIZE + 5)}" stroke="#000000"/>')
        out.append(f'<text x="{_num(px)}" y="{_num(y0 + PLOT_SIZE + 20)}" '
                   f'text-anchor="middle">{_num(_display(ax1.param, vx))}</text>')
        out.append(f'<line x1="{_num(x0 - 5)}" y1="{_num(py)}" x2="{_num(x0)}" '
                   f'y2="{_num(py)}" stroke="#000000"/>')
        out.append(f'<text x="{_num(x0 - 8)}" y="{_num(py + 4)}" '
                   f'text-anchor="end">{_num(_display(ax2.param, vy))}</text>')
    out.append(f'<text x="{_num(x0 + PLOT_SIZE / 2)}" y="{_num(y0 + PLOT_SIZE + 45)}" '
               f'text-anchor="middle">{escape(_axis_label(ax1.param))}</text>')
    cy = y0 + PLOT_SIZE / 2
    out.append(f'<text x="20" y="{_num(cy)}" text-anchor="middle" '
               f'transform="rotate(-90 20 {_num(cy)})">{escape(_axis_label(ax2.param))}</text>')

    # legend
    lx = x0 + PLOT_SIZE + 25
    steps = 50
    bar_h = PLOT_SIZE * 0.6
    for k in range(steps):
        t = 1.0 - k / (steps - 1) if span > 0 else 0.0
        out.append(f'<rect x="{_num(lx)}" y="{_num(y0 + k * bar_h / steps)}" width="20" '
                   f'height="{_num(bar_h / steps)}" fill="{color(t)}"/>')
    out.append(f'<text x="{_num(lx)}" y="{_num(y0 - 10)}">{escape(column)}</text>')
    if span > 0:
        out.append(f'<text x="{_num(lx + 25)}" y="{_num(y0 + 10)}">{_num(vmax)}</text>')
        out.append(f'<text x="{_num(lx + 25)}" y="{_num(y0 + bar_h)}">{_num(vmin)}</text>')
    else:
        out.append(f'<text x="{_num(lx + 25)}" y="{_num(y0 + 10)}">min = max</text>')
        out.append(f'<text x="{_num(lx + 25)}" y="{_num(y0 + 26)}">= {_num(vmin)}</text>')
    hy = y0 + bar_h + 20
    out.append(f'<rect x="{_num(lx)}" y="{_num(hy)}" width="20" height="12" '
               f'fill="url(#hatch)" stroke="#000000" stroke-width="0.5"/>')
    out.append(f'<text x="{_num(lx + 25)}" y="{_num(hy + 10)}">unstable</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
