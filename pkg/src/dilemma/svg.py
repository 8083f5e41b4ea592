"""Dependency-free SVG line charts for sweep results.

Output is a pure function of the input: no timestamps, ids or random
colors, so identical results give identical bytes.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .simulation import SweepResult

WIDTH, HEIGHT = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 80, 170, 40, 50
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")

KINDS = {
    "payout": ("mean_payout", "mean payout per step"),
    "action": ("repair_freq", "probability of repairing"),
}


def _nice_step(span: float, target: int = 5) -> float:
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    for m in (1, 2, 2.5, 5, 10):
        if raw <= m * mag:
            return m * mag
    return 10 * mag


def _ticks(lo: float, hi: float):
    step = _nice_step(hi - lo)
    start = math.ceil(lo / step - 1e-9)
    stop = math.floor(hi / step + 1e-9)
    return [round(k * step, 10) for k in range(start, stop + 1)]


def _range(values, pad_fraction=0.05):
    lo, hi = min(values), max(values)
    if hi == lo:
        pad = abs(lo) * 0.1 or 1.0
        return lo - pad, hi + pad
    pad = (hi - lo) * pad_fraction
    return lo - pad, hi + pad


def _num(x: float) -> str:
    return f"{x:.2f}"


def _label(x: float) -> str:
    return f"{x:g}"


def render_svg_text(result: SweepResult, kind: str = "payout") -> str:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {', '.join(KINDS)}")
    if not result.points:
        raise ValueError("cannot plot an empty result")
    metric, ylabel = KINDS[kind]

    xs = [p.probability for p in result.points]
    ys = [p.value(metric)[0] for p in result.points]
    x_lo, x_hi = (0.0, 1.0) if min(xs) >= 0 and max(xs) <= 1 and min(xs) != max(xs) else _range(xs)
    y_lo, y_hi = (0.0, 1.0) if metric == "repair_freq" else _range(ys)

    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def sx(x):
        return LEFT + (x - x_lo) / (x_hi - x_lo) * pw

    def sy(y):
        return TOP + (y_hi - y) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{_num(LEFT + pw / 2)}" y="22" text-anchor="middle" font-size="14">'
        f'{escape(result.experiment)}</text>',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x_lo, x_hi):
        x = sx(t)
        out.append(f'<line x1="{_num(x)}" y1="{TOP + ph}" x2="{_num(x)}" y2="{TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{_num(x)}" y="{TOP + ph + 18}" text-anchor="middle">{_label(t)}</text>')
    for t in _ticks(y_lo, y_hi):
        y = sy(t)
        out.append(f'<line x1="{LEFT - 5}" y1="{_num(y)}" x2="{LEFT}" y2="{_num(y)}" stroke="black"/>')
        out.append(f'<line x1="{LEFT}" y1="{_num(y)}" x2="{LEFT + pw}" y2="{_num(y)}" stroke="#dddddd"/>')
        out.append(f'<text x="{LEFT - 8}" y="{_num(y + 4)}" text-anchor="end">{_label(t)}</text>')
    out.append(f'<text x="{_num(LEFT + pw / 2)}" y="{HEIGHT - 12}" text-anchor="middle">probability</text>')
    out.append(f'<text x="18" y="{_num(TOP + ph / 2)}" text-anchor="middle" '
               f'transform="rotate(-90 18 {_num(TOP + ph / 2)})">{escape(ylabel)}</text>')

    for i, agent in enumerate(result.agents):
        color = PALETTE[i % len(PALETTE)]
        pts = [(sx(p.probability), sy(p.value(metric)[0])) for p in result.series(agent)]
        out.append(f'<g class="series" data-agent="{escape(agent)}">')
        if len(pts) > 1:
            coords = " ".join(f"{_num(x)},{_num(y)}" for x, y in pts)
            out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>')
        for x, y in pts:
            out.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="3" fill="{color}"/>')
        out.append("</g>")
        ly = TOP + 10 + 20 * i
        lx = LEFT + pw + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(agent)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(result: SweepResult, kind: str, path) -> None:
    text = render_svg_text(result, kind)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
