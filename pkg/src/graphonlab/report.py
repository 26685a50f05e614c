"""CSV and standalone SVG output.

CSV follows RFC 4180 (CRLF line endings, mandatory header); floats are
written with 17 significant digits so values round-trip exactly. Missing
values (None, NaN) are written as empty cells.
"""
from __future__ import annotations

import csv
import math
from html import escape

import numpy as np

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"]


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "" if math.isnan(value) else format(float(value), ".17g")
    return str(value)


def write_csv(path, columns, rows) -> None:
    """``rows`` are dicts keyed by column name or sequences in column order."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(columns)
        for row in rows:
            if isinstance(row, dict):
                row = [row.get(c) for c in columns]
            w.writerow([fmt(v) for v in row])


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# ---------------------------------------------------------------------------
# SVG charts
# ---------------------------------------------------------------------------

def _nice_ticks(lo, hi, count=5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= raw), default=raw)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _log_ticks(lo, hi):
    return [10.0 ** e for e in range(math.floor(lo), math.ceil(hi) + 1)
            if lo - 1e-9 <= e <= hi + 1e-9]


def _label(v):
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        e = int(math.floor(math.log10(abs(v))))
        m = v / 10 ** e
        return f"1e{e}" if abs(m - 1) < 1e-9 else f"{m:g}e{e}"
    return f"{v:g}"


def line_chart(path, series, title="", xlabel="", ylabel="", log_x=True, log_y=False,
               width=720, height=460) -> None:
    """Write an SVG line chart.

    ``series`` is a list of dicts with keys ``label``, ``x``, ``y`` and
    optional ``dash`` (bool) and ``markers`` (bool). Non-finite points and
    nonpositive values on log axes are skipped.
    """
    left, right, top, bottom = 70, 190, 40, 55
    pw, ph = width - left - right, height - top - bottom

    def tx(v):
        return math.log10(v) if log_x else v

    def ty(v):
        return math.log10(v) if log_y else v

    def ok(x, y):
        return (math.isfinite(x) and math.isfinite(y)
                and (not log_x or x > 0) and (not log_y or y > 0))

    pts = [(tx(x), ty(y)) for s in series for x, y in zip(s["x"], s["y"]) if ok(x, y)]
    if not pts:
        pts = [(0.0, 0.0), (1.0, 1.0)]
    xs, ys = zip(*pts)
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.04 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def px(v):
        return left + (v - x0) / (x1 - x0) * pw

    def py(v):
        return top + ph - (v - y0) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<text x="{left + pw / 2:.1f}" y="22" text-anchor="middle" font-size="15">'
           f'{escape(title)}</text>',
           f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    xt = _log_ticks(x0, x1) if log_x else _nice_ticks(x0, x1)
    for t in xt:
        v = math.log10(t) if log_x else t
        if not x0 <= v <= x1:
            continue
        X = px(v)
        out.append(f'<line x1="{X:.1f}" y1="{top}" x2="{X:.1f}" y2="{top + ph}" stroke="#ddd"/>')
        out.append(f'<text x="{X:.1f}" y="{top + ph + 16}" text-anchor="middle">{_label(t)}</text>')
    yt = _log_ticks(y0, y1) if log_y else _nice_ticks(y0, y1)
    for t in yt:
        v = math.log10(t) if log_y else t
        if not y0 <= v <= y1:
            continue
        Y = py(v)
        out.append(f'<line x1="{left}" y1="{Y:.1f}" x2="{left + pw}" y2="{Y:.1f}" stroke="#ddd"/>')
        out.append(f'<text x="{left - 6}" y="{Y + 4:.1f}" text-anchor="end">{_label(t)}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 12}" text-anchor="middle">'
               f'{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {top + ph / 2:.1f})">{escape(ylabel)}</text>')
    for i, s in enumerate(series):
        color = s.get("color", PALETTE[i % len(PALETTE)])
        seg = [(px(tx(x)), py(ty(y))) for x, y in zip(s["x"], s["y"]) if ok(x, y)]
        dash = ' stroke-dasharray="6,4"' if s.get("dash") else ""
        if len(seg) > 1:
            d = " ".join(f"{a:.1f},{b:.1f}" for a, b in seg)
            out.append(f'<polyline points="{d}" fill="none" stroke="{color}" '
                       f'stroke-width="2"{dash}/>')
        if s.get("markers", True):
            for a, b in seg:
                out.append(f'<circle cx="{a:.1f}" cy="{b:.1f}" r="3" fill="{color}"/>')
        ly = top + 14 + 18 * i
        out.append(f'<line x1="{left + pw + 12}" y1="{ly - 4}" x2="{left + pw + 36}" '
                   f'y2="{ly - 4}" stroke="{color}" stroke-width="2"{dash}/>')
        out.append(f'<text x="{left + pw + 42}" y="{ly}">{escape(s["label"])}</text>')
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")


_STOPS = [(0.0, (68, 1, 84)), (0.25, (59, 82, 139)), (0.5, (33, 145, 140)),
          (0.75, (94, 201, 98)), (1.0, (253, 231, 37))]


def _color(t):
    t = min(max(t, 0.0), 1.0)
    for (a, ca), (b, cb) in zip(_STOPS, _STOPS[1:]):
        if t <= b:
            f = (t - a) / (b - a)
            return "#%02x%02x%02x" % tuple(round(x + f * (y - x)) for x, y in zip(ca, cb))
    return "#%02x%02x%02x" % _STOPS[-1][1]


def heatmap(path, values, title="", max_cells=96, size=480) -> None:
    """Write a heatmap SVG of a square matrix, block-averaged to at most
    ``max_cells`` per side."""
    V = np.asarray(values, dtype=float)
    m = V.shape[0]
    if m > max_cells:
        f = int(math.ceil(m / max_cells))
        k = m // f
        V = V[:k * f, :k * f].reshape(k, f, k, f).mean(axis=(1, 3))
        m = k
    lo, hi = float(np.nanmin(V)), float(np.nanmax(V))
    span = hi - lo if hi > lo else 1.0
    cell = size / m
    off = 40
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 2 * off + 60}" '
           f'height="{size + 2 * off}" font-family="sans-serif" font-size="12">',
           f'<rect width="100%" height="100%" fill="white"/>',
           f'<text x="{off + size / 2}" y="24" text-anchor="middle" font-size="15">'
           f'{escape(title)}</text>']
    for i in range(m):
        for j in range(m):
            out.append(f'<rect x="{off + j * cell:.2f}" y="{off + i * cell:.2f}" '
                       f'width="{cell + 0.05:.2f}" height="{cell + 0.05:.2f}" '
                       f'fill="{_color((V[i, j] - lo) / span)}"/>')
    for t in range(10):
        y = off + size * (1 - (t + 1) / 10)
        out.append(f'<rect x="{off + size + 15}" y="{y:.1f}" width="15" '
                   f'height="{size / 10:.1f}" fill="{_color((t + 0.5) / 10)}"/>')
    out.append(f'<text x="{off + size + 35}" y="{off + 10}">{_label(hi)}</text>')
    out.append(f'<text x="{off + size + 35}" y="{off + size}">{_label(lo)}</text>')
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
