"""Static SVG figures built from string templates (no plotting library)."""
import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 480
MARGIN = dict(left=80, right=130, top=40, bottom=60)
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]


def _nice_ticks(lo, hi, count=6):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _fmt(v):
    return f"{v:.6g}"


def plot_svg(series, xlabel, ylabel, title="", log_y=False, xlim=None, ylim=None):
    """Render ``series`` to an SVG string.

    Each series is a dict with ``x``, ``y``, optional ``label``, ``color``
    and ``style`` ('line', 'markers' or 'both').  With ``log_y`` the values
    are plotted as ``log10`` and non-positive values are dropped.
    """
    def ty(v):
        return math.log10(v) if log_y else v

    pts = [(x, ty(y)) for s in series for x, y in zip(s["x"], s["y"]) if not (log_y and y <= 0)]
    xs = [p[0] for p in pts] or [0.0, 1.0]
    ys = [p[1] for p in pts] or [0.0, 1.0]
    x0, x1 = xlim or (min(xs), max(xs))
    y0, y1 = (ty(ylim[0]), ty(ylim[1])) if ylim else (min(ys), max(ys))
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.04 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(x):
        return MARGIN["left"] + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return MARGIN["top"] + (1 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" '
        f'fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>')
    for t in _nice_ticks(x0, x1):
        if x0 <= t <= x1:
            X = sx(t)
            out.append(f'<line x1="{X:.2f}" y1="{MARGIN["top"] + ph}" x2="{X:.2f}" '
                       f'y2="{MARGIN["top"] + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{X:.2f}" y="{MARGIN["top"] + ph + 18}" text-anchor="middle">{_fmt(t)}</text>')
    for t in _nice_ticks(y0, y1):
        if y0 <= t <= y1:
            Y = sy(t)
            label = f"1e{_fmt(t)}" if log_y else _fmt(t)
            out.append(f'<line x1="{MARGIN["left"] - 5}" y1="{Y:.2f}" x2="{MARGIN["left"]}" '
                       f'y2="{Y:.2f}" stroke="black"/>')
            out.append(f'<text x="{MARGIN["left"] - 8}" y="{Y + 4:.2f}" text-anchor="end">{label}</text>')
    out.append(f'<text x="{MARGIN["left"] + pw / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="18" y="{MARGIN["top"] + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {MARGIN["top"] + ph / 2:.1f})">{escape(ylabel)}</text>')

    for i, s in enumerate(series):
        color = s.get("color", PALETTE[i % len(PALETTE)])
        style = s.get("style", "line")
        coords = [(sx(x), sy(ty(y))) for x, y in zip(s["x"], s["y"]) if not (log_y and y <= 0)]
        if style in ("line", "both") and len(coords) > 1:
            path = " ".join(f"{X:.2f},{Y:.2f}" for X, Y in coords)
            out.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        if style in ("markers", "both"):
            r = s.get("size", 2.5)
            out += [f'<circle cx="{X:.2f}" cy="{Y:.2f}" r="{r}" fill="{color}"/>' for X, Y in coords]
        if s.get("label"):
            ly = MARGIN["top"] + 14 + 16 * i
            lx = MARGIN["left"] + pw + 10
            out.append(f'<rect x="{lx}" y="{ly - 8}" width="10" height="10" fill="{color}"/>')
            out.append(f'<text x="{lx + 14}" y="{ly + 1}">{escape(s["label"])}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def bands_svg(ds):
    """Dispersion diagram: theta on the horizontal axis, k vertical; flat points in red."""
    wide = [p for p in ds.points if not p.flat]
    flat = [p for p in ds.points if p.flat]
    series = [dict(x=[p.theta for p in wide], y=[p.k for p in wide], style="markers",
                   color="#1f77b4", label="bands")]
    if flat:
        series.append(dict(x=[p.theta for p in flat], y=[p.k for p in flat], style="markers",
                           color="#d62728", label="flat / excluded"))
    return plot_svg(series, "theta", "k", title=f"{ds.model} strip dispersion",
                    xlim=(-math.pi, math.pi), ylim=(ds.k_min, ds.k_max))


def decay_svg(report):
    """Per-family ``|a|^2+|b|^2`` (solid) and ``||b|^2-|a|^2|`` (markers) on a log axis."""
    from .analysis import column_order
    recs = column_order(report.records)
    pos = {r.edge_id: i + 1 for i, r in enumerate(recs)}
    series = []
    for i, fam in enumerate(f for f in ("g", "h", "f", "e") if any(r.family == f for r in recs)):
        rs = [r for r in recs if r.family == fam]
        color = PALETTE[i]
        series.append(dict(x=[pos[r.edge_id] for r in rs], y=[r.sum_sq for r in rs], style="both",
                           color=color, label=f"{fam}: sum"))
        series.append(dict(x=[pos[r.edge_id] for r in rs], y=[r.flux_sq for r in rs], style="markers",
                           color=color, size=4, label=f"{fam}: |diff|"))
    return plot_svg(series, "edge position (column order)", "coefficient combination", log_y=True,
                    title=f"k = {report.k:.6g}, theta = {report.theta:.4g}")


def current_svg(rows):
    """Relative current against theta for ``rows`` of ``(theta, k, current)``."""
    series = [dict(x=[r[0] for r in rows], y=[r[2] for r in rows], style="both", label="current")]
    return plot_svg(series, "theta", "relative current", title="current along left edge",
                    xlim=(-math.pi, math.pi), ylim=(-1.0, 1.0))
