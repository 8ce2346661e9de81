"""Deterministic SVG drawings of two-state geometry.

Coordinates are computed exactly and only rounded when written, at a fixed
6 decimal places, so identical inputs give byte-identical files.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence
from xml.sax.saxutils import escape

from .exactnum import ZERO, ONE
from .experiments import DimensionCap, Experiment, Prior, posteriors, subset_sums

SCALE = 600
MARGIN = 60
SIZE = SCALE + 2 * MARGIN
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def fmt(x: Fraction) -> str:
    """Fixed six-decimal rendering with exact round-half-even."""
    q = round(Fraction(x) * 10 ** 6)
    sign = "-" if q < 0 else ""
    q = abs(q)
    return f"{sign}{q // 10 ** 6}.{q % 10 ** 6:06d}"


def to_canvas(p: Sequence[Fraction]) -> tuple:
    x, y = p
    return MARGIN + SCALE * Fraction(x), MARGIN + SCALE * (ONE - Fraction(y))


def _pt(p) -> str:
    x, y = to_canvas(p)
    return f"{fmt(x)},{fmt(y)}"


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list:
    """Counter-clockwise hull vertices without collinear points, from the lowest-leftmost.

    A degenerate hull comes back as one or two points.
    """
    pts = sorted(set((Fraction(x), Fraction(y)) for x, y in points))
    if len(pts) <= 2:
        return sorted(pts, key=lambda p: (p[1], p[0]))
    # Andrew's monotone chain
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    start = min(range(len(hull)), key=lambda i: (hull[i][1], hull[i][0]))
    return hull[start:] + hull[:start]


def zonotope_polygon(e) -> list:
    return convex_hull(subset_sums(e))


def _ray_end(c) -> tuple:
    m = max(c)
    return (c[0] / m, c[1] / m)


def cone_rays(e) -> list:
    """Endpoints on the unit box of the extreme rays of the conic span (one if degenerate)."""
    cols = [c for c in (e.matrix if isinstance(e, Experiment) else e).columns() if any(c)]
    lo = hi = cols[0]
    for c in cols[1:]:
        if _cross((ZERO, ZERO), lo, c) < 0:
            lo = c
        if _cross((ZERO, ZERO), hi, c) > 0:
            hi = c
    ends = [_ray_end(lo), _ray_end(hi)]
    return ends[:1] if ends[0] == ends[1] else ends


def cone_polygon(e) -> list:
    """The cone clipped to the unit box: origin, first ray, box corners between, second ray."""
    rays = cone_rays(e)
    if len(rays) == 1:
        return [(ZERO, ZERO), rays[0]]
    a, b = rays
    poly = [(ZERO, ZERO), a]
    if _cross((ZERO, ZERO), a, (ONE, ONE)) > 0 and _cross((ZERO, ZERO), (ONE, ONE), b) > 0:
        poly.append((ONE, ONE))
    poly.append(b)
    return poly


def _check_two_states(e: Experiment):
    if e.n_states != 2:
        raise DimensionCap(f"plots of sets need 2 states, got {e.n_states}")


def _frame(title: str, xlabel: str, ylabel: str) -> list:
    o = to_canvas((ZERO, ZERO))
    x1 = to_canvas((ONE, ZERO))
    y1 = to_canvas((ZERO, ONE))
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<title>{escape(title)}</title>',
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
        f'<line class="axis" x1="{fmt(o[0])}" y1="{fmt(o[1])}" x2="{fmt(x1[0])}" y2="{fmt(x1[1])}" stroke="black"/>',
        f'<line class="axis" x1="{fmt(o[0])}" y1="{fmt(o[1])}" x2="{fmt(y1[0])}" y2="{fmt(y1[1])}" stroke="black"/>',
        f'<text x="{fmt(x1[0])}" y="{fmt(o[1] + 30)}" text-anchor="end">{escape(xlabel)}</text>',
        f'<text x="{fmt(o[0] - 10)}" y="{fmt(y1[1] - 10)}">{escape(ylabel)}</text>',
    ]


def render_sets(kind: str, experiments: Sequence[Experiment], names: Sequence[str]) -> str:
    """``kind`` is ``"cone"`` or ``"zon"``; one overlay per experiment."""
    out = _frame(f"{kind}: " + ", ".join(names), "ω1 expected utility", "ω2 expected utility")
    for i, (e, name) in enumerate(zip(experiments, names)):
        _check_two_states(e)
        color = PALETTE[i % len(PALETTE)]
        label = escape(name, {'"': "&quot;"})
        if kind == "zon":
            poly = zonotope_polygon(e)
        elif kind == "cone":
            poly = cone_polygon(e)
        else:
            raise ValueError(f"unknown set kind {kind!r}")
        pts = " ".join(_pt(p) for p in poly)
        out.append(f'<polygon class="{kind}" data-experiment="{label}" points="{pts}" '
                   f'fill="{color}" fill-opacity="0.2" stroke="{color}"/>')
        if kind == "cone":
            o = _pt((ZERO, ZERO)).split(",")
            for end in cone_rays(e):
                x, y = _pt(end).split(",")
                out.append(f'<line class="ray" data-experiment="{label}" x1="{o[0]}" y1="{o[1]}" '
                           f'x2="{x}" y2="{y}" stroke="{color}" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_posteriors(experiments: Sequence[Experiment], names: Sequence[str], mu0: Prior) -> str:
    """Posterior atoms plotted at (μ(ω1), μ(ω2)); circle area grows with the atom's weight."""
    out = _frame("posteriors: " + ", ".join(names), "μ(ω1)", "μ(ω2)")
    n = len(mu0)
    if not 2 <= n <= 3:
        raise DimensionCap(f"posterior plots support 2 or 3 states, got {n}")
    simplex = [(ONE, ZERO), (ZERO, ONE)] if n == 2 else [(ZERO, ZERO), (ONE, ZERO), (ZERO, ONE)]
    out.append(f'<polygon class="simplex" points="{" ".join(_pt(p) for p in simplex)}" '
               f'fill="none" stroke="gray"/>')
    for i, (e, name) in enumerate(zip(experiments, names)):
        color = PALETTE[i % len(PALETTE)]
        label = escape(name, {'"': "&quot;"})
        dist = posteriors(e, mu0)
        for (post, w), m in zip(dist.atoms, dist.realizations):
            x, y = _pt(post[:2]).split(",")
            out.append(f'<circle class="posterior" data-experiment="{label}" data-realization="{m}" '
                       f'cx="{x}" cy="{y}" r="{fmt(4 + 20 * w)}" fill="{color}" fill-opacity="0.6"/>')
    x, y = _pt(mu0.mu[:2]).split(",")
    out.append(f'<circle class="prior" cx="{x}" cy="{y}" r="3" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
