"""Minimal SVG step plots of Betti curves.

Output depends only on the curves passed in, so identical inputs give
byte-identical files.
"""
from __future__ import annotations

from typing import Iterable, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

from .filtration import BettiCurve

WIDTH, HEIGHT = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 60, 20, 30, 50

STYLES = {
    "group1": {"stroke": "#1f4e9c", "dash": None},
    "group2": {"stroke": "#c0392b", "dash": "5,4"},
}


def _num(x: float) -> str:
    return f"{x:.2f}"


def _step_points(curve: BettiCurve, sx, sy) -> str:
    pts = []
    lams = curve.lambdas.tolist() + [curve.domain_max]
    vals = curve.betti.tolist()
    for r, b in enumerate(vals):
        pts.append((sx(lams[r]), sy(b)))
        pts.append((sx(lams[r + 1]), sy(b)))
    return " ".join(f"{_num(x)},{_num(y)}" for x, y in pts)


def _ticks(lo: float, hi: float, k: int = 5):
    if hi <= lo:
        return [lo]
    return [lo + (hi - lo) * i / k for i in range(k + 1)]


def step_plot_svg(
    series: Sequence[Tuple[BettiCurve, str]],
    title: str = "",
    legend: Optional[Iterable[str]] = None,
    stroke_width: float = 1.5,
) -> str:
    """Render (curve, style_key) pairs on shared axes.

    ``style_key`` picks an entry of STYLES; one legend row is drawn per
    distinct key in first-seen order.
    """
    if not series:
        raise ValueError("nothing to plot")
    xmax = max(c.domain_max for c, _ in series) or 1.0
    ymax = max(int(c.betti.max()) for c, _ in series)
    ymin = min(int(c.betti.min()) for c, _ in series)
    ymin = min(ymin, ymax - 1)
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def sx(x):
        return LEFT + pw * x / xmax

    def sy(y):
        return TOP + ph * (1.0 - (y - ymin) / (ymax - ymin))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="18" text-anchor="middle" font-family="sans-serif" font-size="14">{escape(title)}</text>',
        f'<line x1="{LEFT}" y1="{TOP + ph}" x2="{LEFT + pw}" y2="{TOP + ph}" stroke="black"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + ph}" stroke="black"/>',
    ]
    for t in _ticks(0.0, xmax):
        x = sx(t)
        out.append(f'<line x1="{_num(x)}" y1="{TOP + ph}" x2="{_num(x)}" y2="{TOP + ph + 5}" stroke="black"/>')
        out.append(
            f'<text x="{_num(x)}" y="{TOP + ph + 18}" text-anchor="middle" font-family="sans-serif" font-size="11">{t:.3g}</text>'
        )
    for t in _ticks(ymin, ymax):
        y = sy(t)
        out.append(f'<line x1="{LEFT - 5}" y1="{_num(y)}" x2="{LEFT}" y2="{_num(y)}" stroke="black"/>')
        out.append(
            f'<text x="{LEFT - 8}" y="{_num(y + 4)}" text-anchor="end" font-family="sans-serif" font-size="11">{t:.4g}</text>'
        )
    out.append(
        f'<text x="{LEFT + pw / 2}" y="{HEIGHT - 10}" text-anchor="middle" font-family="sans-serif" font-size="12">filtration value</text>'
    )
    out.append(
        f'<text x="15" y="{TOP + ph / 2}" text-anchor="middle" font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 15 {TOP + ph / 2})">beta0</text>'
    )
    seen = []
    for curve, key in series:
        style = STYLES.get(key, STYLES["group1"])
        dash = f' stroke-dasharray="{style["dash"]}"' if style["dash"] else ""
        out.append(
            f'<polyline fill="none" stroke="{style["stroke"]}" stroke-width="{stroke_width}"{dash} '
            f'points="{_step_points(curve, sx, sy)}"/>'
        )
        if key not in seen:
            seen.append(key)
    names = list(legend) if legend is not None else seen
    for i, key in enumerate(seen):
        style = STYLES.get(key, STYLES["group1"])
        dash = f' stroke-dasharray="{style["dash"]}"' if style["dash"] else ""
        y = TOP + 12 + 16 * i
        out.append(
            f'<line x1="{LEFT + 10}" y1="{y}" x2="{LEFT + 40}" y2="{y}" stroke="{style["stroke"]}" stroke-width="2"{dash}/>'
        )
        label = names[i] if i < len(names) else key
        out.append(f'<text x="{LEFT + 46}" y="{y + 4}" font-family="sans-serif" font-size="11">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
