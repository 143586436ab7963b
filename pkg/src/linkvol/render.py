"""Deterministic SVG drawings of diagrams.

The layout is a barycentric (Tutte) embedding of an auxiliary triangulation:
every edge is subdivided twice and every face gets a centre joined to its
corners.  The largest face is the outer one and its boundary is pinned to a
circle; everything else is solved by over-relaxed Gauss-Seidel iteration.
Output depends only on the diagram, so equal inputs give identical bytes.
"""
from __future__ import annotations

import math
from typing import Optional

from .covers import Coloring
from .diagram import LEG_NAMES, Diagram, vertex_of

SIZE = 600
COLOR_FILL = {"12": "#c0392b", "13": "#2471a3", "23": "#229954"}


def _mids(d: Diagram):
    def mids(h):
        k = d.edge_key(h)
        near, far = ("M", k, 0), ("M", k, 1)
        return (near, far) if h == k else (far, near)
    return mids


def _layout_component(d: Diagram, comp: set, iterations: int):
    """Unit-disk positions for one projection component."""
    mids = _mids(d)
    orbits = [(i, orb) for i, orb in enumerate(d.face_orbits()) if vertex_of(orb[0]) in comp]
    # auxiliary vertices: ("V", vertex), ("M", edge key, 0|1), ("F", face)
    nbrs = {}

    def link(a, b):
        nbrs.setdefault(a, set()).add(b)
        nbrs.setdefault(b, set()).add(a)

    for h, p in d.edges():
        if vertex_of(h) not in comp:
            continue
        a, b = mids(h)
        link(("V", vertex_of(h)), a)
        link(a, b)
        link(b, ("V", vertex_of(p)))
    outer = max(orbits, key=lambda io: (len(io[1]), -io[0]))[0]
    ring = []
    for i, orb in orbits:
        corners = []
        for h in orb:
            a, b = mids(h)
            corners += [("V", vertex_of(h)), a, b]
        if i == outer:
            ring = corners
            continue
        for v in corners:
            link(("F", i), v)
    pos = {}
    seen = []
    for v in ring:
        if v not in pos:
            seen.append(v)
            pos[v] = None
    for j, v in enumerate(seen):
        t = -2 * math.pi * j / len(seen)
        pos[v] = (math.cos(t), math.sin(t))
    fixed = set(seen)
    free = sorted((v for v in nbrs if v not in fixed), key=repr)
    for v in free:
        pos[v] = (0.0, 0.0)
    omega = 1.7
    for _ in range(iterations):
        for v in free:
            ns = nbrs[v]
            x = sum(pos[u][0] for u in ns) / len(ns)
            y = sum(pos[u][1] for u in ns) / len(ns)
            ox, oy = pos[v]
            pos[v] = (ox + omega * (x - ox), oy + omega * (y - oy))
    return pos


def _layout(d: Diagram, iterations: int = 400):
    """Canvas positions; split components go side by side in a grid."""
    comps = d.projection_components()
    cols = math.ceil(math.sqrt(len(comps)))
    rows = math.ceil(len(comps) / cols)
    cell = SIZE / max(cols, rows)
    top = (SIZE - rows * cell) / 2
    out = {}
    for n, comp in enumerate(comps):
        pos = _layout_component(d, set(comp), iterations)
        cx = cell * (n % cols + 0.5)
        cy = top + cell * (n // cols + 0.5)
        scale = cell * 0.42
        for v, (x, y) in pos.items():
            out[v] = (cx + scale * x, cy - scale * y)
    return out, _mids(d)


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _toward(a, b, dist):
    dx, dy = b[0] - a[0], b[1] - a[1]
    n = math.hypot(dx, dy) or 1.0
    return (a[0] + dx / n * dist, a[1] + dy / n * dist)


def render(d: Diagram, coloring: Optional[Coloring] = None, style: Optional[dict] = None) -> str:
    """SVG text: strands as polylines with a gap in the under-strand at each
    crossing; disks as circles with NE/NW/SW/SE marks and dashed mu (horizontal)
    and lambda (vertical) reference circles."""
    style = dict(style or {})
    stroke = style.get("stroke", 2.5)
    gap = style.get("gap", 10.0)
    radius = style.get("disk_radius", 14.0)
    pos, mids = _layout(d, style.get("iterations", 400))
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
           f'viewBox="0 0 {SIZE} {SIZE}">',
           f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>']

    def end_point(h, toward):
        v = vertex_of(h)
        p = pos[("V", v)]
        if v[0] == "B":
            return _toward(p, toward, radius)
        if not d.over_at(h):
            return _toward(p, toward, gap)
        return p

    for h, p in d.edges():
        a, b = mids(h)
        pa, pb = pos[a], pos[b]
        pts = [end_point(h, pa), pa, pb, end_point(p, pb)]
        col = "black"
        if coloring is not None:
            col = COLOR_FILL[coloring.color_of(d, h).value]
        path = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        out.append(f'<polyline points="{path}" fill="none" stroke="{col}" '
                   f'stroke-width="{stroke}" stroke-linecap="round"/>')
    for b in sorted(d.disks):
        cx, cy = pos[("V", ("B", b))]
        out.append(f'<ellipse cx="{_fmt(cx)}" cy="{_fmt(cy)}" rx="{_fmt(radius * 2.2)}" '
                   f'ry="{_fmt(radius * 1.4)}" fill="none" stroke="#888" stroke-dasharray="4,3"/>')
        out.append(f'<ellipse cx="{_fmt(cx)}" cy="{_fmt(cy)}" rx="{_fmt(radius * 1.4)}" '
                   f'ry="{_fmt(radius * 2.2)}" fill="none" stroke="#bbb" stroke-dasharray="2,3"/>')
        out.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(radius)}" '
                   f'fill="#f4f4f4" stroke="black"/>')
        content = d.disks[b]
        label = f"B{b}" if content is None else f"B{b}: {content}"
        out.append(f'<text x="{_fmt(cx)}" y="{_fmt(cy + 3)}" font-size="8" '
                   f'text-anchor="middle">{label}</text>')
        for k, name in enumerate(LEG_NAMES):
            h = ("B", b, k)
            a, _ = mids(h)
            px, py = _toward((cx, cy), pos[a], radius)
            out.append(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="2" fill="black"/>')
            lx, ly = _toward((cx, cy), pos[a], radius + 9)
            out.append(f'<text x="{_fmt(lx)}" y="{_fmt(ly + 3)}" font-size="7" '
                       f'text-anchor="middle">{name}</text>')
    if style.get("label_crossings"):
        for x in sorted(d.crossings):
            cx, cy = pos[("V", ("X", x))]
            out.append(f'<text x="{_fmt(cx + 6)}" y="{_fmt(cy - 6)}" font-size="7">{x}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def to_svg(d: Diagram, coloring: Optional[Coloring] = None) -> str:
    return render(d, coloring)
