"""Minimal hand-rolled SVG 1.1 line charts: axes, polylines, legend.

No timestamps or randomness anywhere; identical input produces identical
bytes, which the reproducibility tests rely on.
"""

from __future__ import annotations

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#17becf", "#7f7f7f")

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 62, 16, 34, 46


def _num(x: float) -> str:
    return f"{x:.6g}"


def _ticks(lo: float, hi: float, n: int = 5) -> np.ndarray:
    if hi == lo:
        hi = lo + 1.0
    return np.linspace(lo, hi, n)


def line_chart(series, title: str = "", xlabel: str = "", ylabel: str = "",
               markers=None) -> str:
    """Render labelled (xs, ys) series to an SVG document string.

    ``series`` is an iterable of (label, xs, ys); ``markers`` an optional
    iterable of (label, xs, ys) drawn as small circles instead of lines.
    """
    series = [(str(lbl), np.asarray(xs, float), np.asarray(ys, float))
              for lbl, xs, ys in series]
    markers = [(str(lbl), np.asarray(xs, float), np.asarray(ys, float))
               for lbl, xs, ys in (markers or [])]
    all_x = np.concatenate([xs for _, xs, _ in series + markers])
    all_y = np.concatenate([ys for _, _, ys in series + markers])
    x_lo, x_hi = float(all_x.min()), float(all_x.max())
    y_lo, y_hi = float(all_y.min()), float(all_y.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.04 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def sx(x):
        return _ML + (x - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)

    def sy(y):
        return _H - _MB - (y - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_W // 2}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>'
        )
    # axes
    parts.append(
        f'<line x1="{_ML}" y1="{_H - _MB}" x2="{_W - _MR}" y2="{_H - _MB}" '
        f'stroke="black" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H - _MB}" '
        f'stroke="black" stroke-width="1"/>'
    )
    for tx in _ticks(x_lo, x_hi):
        parts.append(
            f'<line x1="{_num(sx(tx))}" y1="{_H - _MB}" x2="{_num(sx(tx))}" '
            f'y2="{_H - _MB + 4}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_num(sx(tx))}" y="{_H - _MB + 17}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{_num(tx)}</text>'
        )
    for ty in _ticks(y_lo, y_hi):
        parts.append(
            f'<line x1="{_ML - 4}" y1="{_num(sy(ty))}" x2="{_ML}" '
            f'y2="{_num(sy(ty))}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_ML - 7}" y="{_num(sy(ty) + 3)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{_num(ty)}</text>'
        )
    if xlabel:
        parts.append(
            f'<text x="{_W // 2}" y="{_H - 10}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{xlabel}</text>'
        )
    if ylabel:
        parts.append(
            f'<text x="16" y="{_H // 2}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12" '
            f'transform="rotate(-90 16 {_H // 2})">{ylabel}</text>'
        )
    for idx, (label, xs, ys) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        points = " ".join(f"{_num(sx(x))},{_num(sy(y))}" for x, y in zip(xs, ys))
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
            f'points="{points}"/>'
        )
        ly = _MT + 14 * idx
        parts.append(
            f'<line x1="{_W - _MR - 120}" y1="{ly}" x2="{_W - _MR - 98}" '
            f'y2="{ly}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{_W - _MR - 92}" y="{ly + 4}" font-family="sans-serif" '
            f'font-size="10">{label}</text>'
        )
    for idx, (label, xs, ys) in enumerate(markers):
        color = PALETTE[(idx + len(series)) % len(PALETTE)]
        for x, y in zip(xs, ys):
            parts.append(
                f'<circle cx="{_num(sx(x))}" cy="{_num(sy(y))}" r="3" '
                f'fill="{color}"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
