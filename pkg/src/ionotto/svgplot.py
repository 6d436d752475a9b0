"""Minimal deterministic SVG line charts for sweep tables."""
import math
from xml.sax.saxutils import escape

WIDTH, PANEL_H, PAD_L, PAD_R, PAD_T, PAD_B = 640, 300, 70, 130, 30, 45

# name -> (label, colour, dash pattern)
STYLES = {
    "q_h": ("Q_H", "#1f4fd1", "2,4"),
    "q_l": ("Q_L", "#d12a1f", None),
    "w_net": ("W", "#c21fc2", "8,4,2,4"),
    "eta": ("eta", "#1a7f37", None),
    "eta_prime": ("eta'", "#8a6d00", "6,3"),
    "cop": ("COP", "#0b6e8a", None),
}


def _fmt(x):
    return f"{x:.2f}"


def nice_ticks(lo, hi, target=5):
    span = hi - lo
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    return [round(i * step, 12) for i in range(first, last + 1)]


def _extent(values):
    lo, hi = min(values), max(values)
    if hi - lo < 1e-12 * max(1.0, abs(hi)):
        lo, hi = lo - 0.5, hi + 0.5
    margin = 0.05 * (hi - lo)
    return lo - margin, hi + margin


def _panel(x, series, top, xlabel, title):
    """SVG fragment for one panel; ``series`` maps column name to y-values (None gaps)."""
    ys = [v for vals in series.values() for v in vals if v is not None]
    x0, x1 = _extent(x)
    y0, y1 = _extent(ys)
    pw = WIDTH - PAD_L - PAD_R
    ph = PANEL_H - PAD_T - PAD_B

    def sx(v):
        return PAD_L + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return top + PAD_T + (y1 - v) / (y1 - y0) * ph

    out = [f'<g class="panel">',
           f'<rect x="{PAD_L}" y="{top + PAD_T}" width="{pw}" height="{ph}" '
           f'fill="none" stroke="#000"/>',
           f'<text x="{PAD_L + pw / 2:.2f}" y="{top + 18}" text-anchor="middle" '
           f'font-size="14">{escape(title)}</text>']
    for t in nice_ticks(x0, x1):
        out.append(f'<line x1="{_fmt(sx(t))}" y1="{_fmt(top + PAD_T + ph)}" '
                   f'x2="{_fmt(sx(t))}" y2="{_fmt(top + PAD_T + ph + 5)}" stroke="#000"/>')
        out.append(f'<text x="{_fmt(sx(t))}" y="{_fmt(top + PAD_T + ph + 18)}" '
                   f'text-anchor="middle" font-size="11">{t:g}</text>')
    for t in nice_ticks(y0, y1):
        out.append(f'<line x1="{PAD_L - 5}" y1="{_fmt(sy(t))}" x2="{PAD_L}" '
                   f'y2="{_fmt(sy(t))}" stroke="#000"/>')
        out.append(f'<text x="{PAD_L - 8}" y="{_fmt(sy(t) + 4)}" text-anchor="end" '
                   f'font-size="11">{t:g}</text>')
    if y0 < 0 < y1:
        out.append(f'<line x1="{PAD_L}" y1="{_fmt(sy(0))}" x2="{PAD_L + pw}" '
                   f'y2="{_fmt(sy(0))}" stroke="#999" stroke-width="0.5"/>')
    out.append(f'<text x="{PAD_L + pw / 2:.2f}" y="{top + PANEL_H - 6}" '
               f'text-anchor="middle" font-size="12">{escape(xlabel)}</text>')
    for n, (name, vals) in enumerate(series.items()):
        label, colour, dash = STYLES.get(name, (name, "#000", None))
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        # a gap (None) breaks the polyline
        runs, cur = [], []
        for xv, yv in zip(x, vals):
            if yv is None:
                if cur:
                    runs.append(cur)
                cur = []
            else:
                cur.append(f"{_fmt(sx(xv))},{_fmt(sy(yv))}")
        if cur:
            runs.append(cur)
        for run in runs:
            out.append(f'<polyline points="{" ".join(run)}" fill="none" '
                       f'stroke="{colour}" stroke-width="1.8"{dash_attr}/>')
        ly = top + PAD_T + 12 + 18 * n
        lx = PAD_L + pw + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 28}" y2="{ly}" stroke="{colour}" '
                   f'stroke-width="1.8"{dash_attr}/>')
        out.append(f'<text x="{lx + 34}" y="{ly + 4}" font-size="12">{escape(label)}</text>')
    out.append("</g>")
    return out


def sweep_svg(rows, title=""):
    """Two-panel chart: heat/work series, then whichever of eta/eta'/COP are present."""
    x = [r["j"] for r in rows]
    energy = {k: [r[k] for r in rows] for k in ("q_h", "q_l", "w_net")}
    merit = {k: [r[k] for r in rows] for k in ("eta", "eta_prime", "cop")
             if any(r[k] is not None for r in rows)}
    panels = [_panel(x, energy, 0, "J", title or "heat and work")]
    if merit:
        panels.append(_panel(x, merit, PANEL_H, "J", "efficiency / COP"))
    height = PANEL_H * len(panels)
    body = [line for p in panels for line in p]
    return "\n".join(
        ['<?xml version="1.0" encoding="UTF-8"?>',
         f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" '
         f'viewBox="0 0 {WIDTH} {height}" font-family="sans-serif">',
         f'<rect width="{WIDTH}" height="{height}" fill="#fff"/>',
         *body, "</svg>", ""])
