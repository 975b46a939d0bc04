"""Minimal native SVG charts with a log10 value axis."""

from __future__ import annotations

import math
from html import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f", "#bcbd22")
W, H = 720, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 170, 40, 70


def _log_range(values, floor: float):
    logs = [math.log10(max(v, floor)) for v in values if math.isfinite(v)]
    if not logs:
        return -1, 1
    lo, hi = math.floor(min(logs)), math.ceil(max(logs))
    return (lo - 1, hi) if lo == hi else (lo, hi)


def _frame(title: str, ylabel: str, lo: int, hi: int) -> list:
    ph = H - TOP - BOTTOM
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" '
        f'font-family="sans-serif" font-size="12">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2:.1f}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<text x="16" y="{TOP + ph / 2:.1f}" transform="rotate(-90 16 {TOP + ph / 2:.1f})" '
        f'text-anchor="middle">{escape(ylabel)}</text>',
    ]
    step = max(1, math.ceil((hi - lo) / 10))
    for e in range(lo, hi + 1, step):
        y = TOP + ph * (hi - e) / (hi - lo)
        out.append(f'<line x1="{LEFT}" x2="{W - RIGHT}" y1="{y:.1f}" y2="{y:.1f}" stroke="#ddd"/>')
        out.append(f'<text x="{LEFT - 6}" y="{y + 4:.1f}" text-anchor="end">1e{e}</text>')
    out.append(f'<line x1="{LEFT}" x2="{LEFT}" y1="{TOP}" y2="{H - BOTTOM}" stroke="black"/>')
    out.append(f'<line x1="{LEFT}" x2="{W - RIGHT}" y1="{H - BOTTOM}" y2="{H - BOTTOM}" stroke="black"/>')
    return out


def _legend(names) -> list:
    out = []
    for i, name in enumerate(names):
        y = TOP + 18 * i
        out.append(f'<rect x="{W - RIGHT + 14}" y="{y}" width="12" height="12" fill="{PALETTE[i % len(PALETTE)]}"/>')
        out.append(f'<text x="{W - RIGHT + 32}" y="{y + 10}">{escape(name)}</text>')
    return out


def _ypos(v: float, lo: int, hi: int, floor: float) -> float:
    ph = H - TOP - BOTTOM
    e = math.log10(max(v, floor)) if math.isfinite(v) else lo
    e = min(max(e, lo), hi)
    return TOP + ph * (hi - e) / (hi - lo)


def bar_chart(title: str, categories, series: dict, ylabel: str = "magnitude", floor: float = 1e-18) -> str:
    """Grouped bars; series maps a legend name to one value per category."""
    values = [v for vs in series.values() for v in vs]
    lo, hi = _log_range(values, floor)
    out = _frame(title, ylabel, lo, hi)
    pw = W - LEFT - RIGHT
    group = pw / max(1, len(categories))
    bw = 0.8 * group / max(1, len(series))
    base = H - BOTTOM
    for si, vals in enumerate(series.values()):
        color = PALETTE[si % len(PALETTE)]
        for ci, v in enumerate(vals):
            x = LEFT + ci * group + 0.1 * group + si * bw
            y = _ypos(v, lo, hi, floor)
            out.append(f'<rect x="{x:.1f}" y="{y:.1f}" width="{bw:.1f}" height="{base - y:.1f}" fill="{color}"/>')
    for ci, c in enumerate(categories):
        x = LEFT + (ci + 0.5) * group
        out.append(f'<text x="{x:.1f}" y="{base + 18}" text-anchor="middle">{escape(str(c))}</text>')
    out += _legend(series)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def line_chart(title: str, xs, series: dict, xlabel: str = "n", ylabel: str = "magnitude",
               floor: float = 1e-30) -> str:
    """Polylines over categorical x positions."""
    values = [v for vs in series.values() for v in vs]
    lo, hi = _log_range(values, floor)
    out = _frame(title, ylabel, lo, hi)
    pw = W - LEFT - RIGHT
    dx = pw / max(1, len(xs))
    for si, vals in enumerate(series.values()):
        color = PALETTE[si % len(PALETTE)]
        pts = [(LEFT + (i + 0.5) * dx, _ypos(v, lo, hi, floor)) for i, v in enumerate(vals)]
        out.append('<polyline fill="none" stroke="{}" stroke-width="2" points="{}"/>'.format(
            color, " ".join(f"{x:.1f},{y:.1f}" for x, y in pts)))
        for x, y in pts:
            out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="3" fill="{color}"/>')
    for i, x in enumerate(xs):
        out.append(f'<text x="{LEFT + (i + 0.5) * dx:.1f}" y="{H - BOTTOM + 18}" text-anchor="middle">{escape(str(x))}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.1f}" y="{H - 20}" text-anchor="middle">{escape(xlabel)}</text>')
    out += _legend(series)
    out.append("</svg>")
    return "\n".join(out) + "\n"
