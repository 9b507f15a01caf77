"""Minimal standalone SVG line plots (axes, ticks, legend)."""
import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


@dataclass
class Series:
    x: list
    y: list
    label: str = ""
    dashed: bool = False
    color: str = None


def nice_ticks(lo, hi, target=6):
    """Round tick positions covering ``[lo, hi]``."""
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return []
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.ceil(lo / step - 1e-9) * step
    ticks = []
    k = 0
    while start + k * step <= hi + 1e-9 * step:
        ticks.append(round(start + k * step, 12))
        k += 1
    return ticks


def _fmt(v):
    return f"{v:g}"


def _segments(xs, ys):
    # Split at non-finite points so gaps show up as breaks in the line.
    seg = []
    for x, y in zip(xs, ys):
        if y is None or x is None or not (math.isfinite(x) and math.isfinite(y)):
            if len(seg) > 1:
                yield seg
            seg = []
        else:
            seg.append((x, y))
    if len(seg) > 1:
        yield seg


def line_plot(series, title="", xlabel="", ylabel="", width=640, height=420, ylim=None):
    """Render ``series`` (a list of :class:`Series`) into an SVG document string."""
    pts = [(x, y) for s in series for x, y in zip(s.x, s.y)
           if x is not None and y is not None and math.isfinite(x) and math.isfinite(y)]
    if pts:
        x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
        y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    else:
        x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0
    if ylim is not None:
        y0, y1 = ylim
    if x1 <= x0:
        x1 = x0 + 1.0
    if y1 <= y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    left, right, top, bottom = 70, 20, 40, 55
    pw, ph = width - left - right, height - top - bottom

    def sx(x):
        return left + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return top + (y1 - y) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<defs><clipPath id="plot"><rect x="{left}" y="{top}" width="{pw}" height="{ph}"/>'
           f'</clipPath></defs>']
    out.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for t in nice_ticks(x0, x1):
        X = sx(t)
        out.append(f'<line x1="{X:.2f}" y1="{top + ph}" x2="{X:.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{top + ph + 18}" text-anchor="middle">{_fmt(t)}</text>')
    for t in nice_ticks(y0, y1):
        Y = sy(t)
        out.append(f'<line x1="{left - 5}" y1="{Y:.2f}" x2="{left}" y2="{Y:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{Y + 4:.2f}" text-anchor="end">{_fmt(t)}</text>')
    if y0 < 0 < y1:
        out.append(f'<line x1="{left}" y1="{sy(0):.2f}" x2="{left + pw}" y2="{sy(0):.2f}" '
                   f'stroke="#bbbbbb" stroke-width="0.8"/>')

    for i, s in enumerate(series):
        color = s.color or _PALETTE[i % len(_PALETTE)]
        dash = ' stroke-dasharray="6,4"' if s.dashed else ""
        for seg in _segments(s.x, s.y):
            d = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in seg)
            out.append(f'<polyline points="{d}" fill="none" stroke="{color}" stroke-width="1.6"'
                       f'{dash} clip-path="url(#plot)"/>')

    labelled = [(i, s) for i, s in enumerate(series) if s.label]
    for row, (i, s) in enumerate(labelled):
        color = s.color or _PALETTE[i % len(_PALETTE)]
        dash = ' stroke-dasharray="6,4"' if s.dashed else ""
        ly = top + 14 + 16 * row
        lx = left + pw - 130
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" stroke="{color}" '
                   f'stroke-width="1.6"{dash}/>')
        out.append(f'<text x="{lx + 30}" y="{ly + 4}">{escape(s.label)}</text>')

    if title:
        out.append(f'<text x="{width / 2}" y="22" text-anchor="middle" font-size="14">'
                   f'{escape(title)}</text>')
    if xlabel:
        out.append(f'<text x="{left + pw / 2}" y="{height - 12}" text-anchor="middle">'
                   f'{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="16" y="{top + ph / 2}" text-anchor="middle" '
                   f'transform="rotate(-90 16 {top + ph / 2})">{escape(ylabel)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
