"""Bare-bones SVG line and bar charts; text output is deterministic."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

PALETTE = ("#000000", "#1f4fbf", "#c0392b", "#2e8b57", "#8e44ad", "#d35400")
DASHES = ("", "8,4", "2,3", "8,3,2,3", "4,4", "1,2")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _frame(width, height, title):
    return [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">',
            f'<rect width="{width}" height="{height}" fill="white"/>',
            f'<text x="{width / 2:.0f}" y="18" text-anchor="middle" font-size="14" '
            f'font-family="sans-serif">{escape(title)}</text>']


def line_chart(series: Sequence[tuple[str, Sequence[float], Sequence[float]]], title: str,
               xlabel: str, ylabel: str, width: int = 640, height: int = 420,
               ylim: tuple[float, float] | None = None) -> str:
    """``series`` is a list of ``(label, xs, ys)``."""
    left, right, top, bottom = 60, 20, 30, 50
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys]
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = ylim if ylim else (min(ys_all), max(ys_all))
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (1.0 - (min(max(y, y0), y1) - y0) / (y1 - y0)) * ph

    out = _frame(width, height, title)
    out.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>')
    for k in range(5):
        fx = x0 + (x1 - x0) * k / 4
        fy = y0 + (y1 - y0) * k / 4
        out.append(f'<text x="{_fmt(px(fx))}" y="{height - bottom + 16}" text-anchor="middle" '
                   f'font-size="11" font-family="sans-serif">{fx:.3g}</text>')
        out.append(f'<text x="{left - 6}" y="{_fmt(py(fy) + 4)}" text-anchor="end" font-size="11" '
                   f'font-family="sans-serif">{fy:.3g}</text>')
    out.append(f'<text x="{left + pw / 2:.0f}" y="{height - 12}" text-anchor="middle" font-size="12" '
               f'font-family="sans-serif">{escape(xlabel)}</text>')
    out.append(f'<text x="14" y="{top + ph / 2:.0f}" text-anchor="middle" font-size="12" '
               f'font-family="sans-serif" transform="rotate(-90 14 {top + ph / 2:.0f})">'
               f'{escape(ylabel)}</text>')
    for i, (label, xs, ys) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        dash = DASHES[i % len(DASHES)]
        pts = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(xs, ys))
        style = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.6"{style} points="{pts}"/>')
        ly = top + 14 + 16 * i
        out.append(f'<line x1="{left + pw - 150}" y1="{ly}" x2="{left + pw - 120}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="1.6"{style}/>')
        out.append(f'<text x="{left + pw - 114}" y="{ly + 4}" font-size="11" '
                   f'font-family="sans-serif">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def bar_grid(panels: Sequence[Sequence[tuple[str, Sequence[float]]]], row_labels: Sequence[str],
             title: str, cell_w: int = 200, cell_h: int = 140) -> str:
    """Rows of bar charts; ``panels[i][j] = (caption, heights)``."""
    rows = len(panels)
    cols = max(len(r) for r in panels)
    left, top = 110, 30
    width = left + cols * cell_w + 10
    height = top + rows * cell_h + 10
    peak = max((max(h) for row in panels for _, h in row if len(h)), default=1.0) or 1.0
    out = _frame(width, height, title)
    for i, row in enumerate(panels):
        oy = top + i * cell_h
        out.append(f'<text x="8" y="{oy + cell_h / 2:.0f}" font-size="11" '
                   f'font-family="sans-serif">{escape(row_labels[i])}</text>')
        for j, (caption, heights) in enumerate(row):
            ox = left + j * cell_w
            inner_h = cell_h - 34
            base = oy + 14 + inner_h
            out.append(f'<text x="{ox + cell_w / 2:.0f}" y="{oy + 11}" text-anchor="middle" '
                       f'font-size="10" font-family="sans-serif">{escape(caption)}</text>')
            out.append(f'<line x1="{ox + 4}" y1="{base}" x2="{ox + cell_w - 8}" y2="{base}" stroke="#444"/>')
            n = max(len(heights), 1)
            bw = (cell_w - 14) / n
            for k, h in enumerate(heights):
                bh = inner_h * h / peak
                out.append(f'<rect x="{_fmt(ox + 4 + k * bw)}" y="{_fmt(base - bh)}" '
                           f'width="{_fmt(max(bw - 1, 0.5))}" height="{_fmt(bh)}" '
                           f'fill="{PALETTE[1] if k % 2 == 0 else PALETTE[2]}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
