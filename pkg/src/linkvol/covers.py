"""Colorings by transpositions of S3 (simple 3-fold branched covers).

A coloring assigns a transposition to every edge of a diagram.  Edges are
keyed by their smaller half-edge.  At a crossing both over-edges carry the
same color ``o`` and the under-edges satisfy ``u_out = o u_in o``; since
transpositions are involutions the relation does not depend on direction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional

from .diagram import Diagram, DiagramError, slots


class Color(str, Enum):
    T12 = "12"
    T13 = "13"
    T23 = "23"

    @property
    def letters(self):
        return int(self.value[0]), int(self.value[1])

    def perm(self) -> tuple:
        a, b = self.letters
        img = [1, 2, 3]
        img[a - 1], img[b - 1] = b, a
        return tuple(img)


COLORS = (Color.T12, Color.T13, Color.T23)


class ColoringConflict(DiagramError):
    pass


class BridgeTooSmall(ValueError):
    pass


def conjugate(u: Color, o: Color) -> Color:
    """``o u o`` -- the third transposition when the two differ."""
    if u == o:
        return u
    return third(u, o)


def third(a: Color, b: Color) -> Color:
    (c,) = set(COLORS) - {a, b}
    return c


def compose(*perms) -> tuple:
    """Product of permutations applied left to right."""
    out = (1, 2, 3)
    for p in perms:
        out = tuple(p[i - 1] for i in out)
    return out


@dataclass(frozen=True)
class Arc:
    edges: tuple  # edge keys, in order along the arc

    @property
    def id(self):
        return min(self.edges)


@dataclass(frozen=True)
class Coloring:
    colors: Mapping  # edge key -> Color

    def __post_init__(self):
        object.__setattr__(self, "colors", dict(self.colors))

    def color_of(self, d: Diagram, h) -> Color:
        return self.colors[d.edge_key(h)]

    def used(self) -> set:
        return set(self.colors.values())

    def recolor(self, sigma: Mapping) -> "Coloring":
        return Coloring({k: sigma[v] for k, v in self.colors.items()})

    def __hash__(self):
        return hash(tuple(sorted((k, v.value) for k, v in self.colors.items())))


def arcs(d: Diagram) -> list:
    """Maximal runs of edges continuing straight over crossings."""
    seen = set()
    out = []
    keys = [d.edge_key(h) for h, _ in d.edges()]
    for k in keys:
        if k in seen:
            continue
        # walk backwards to an end of the arc, then forwards collecting edges
        start = _arc_end(d, k)
        run = []
        h = start
        while True:
            key = d.edge_key(h)
            if key in seen:
                break
            seen.add(key)
            run.append(key)
            p = d.partner(h)
            if p[0] == "X" and d.over_at(p):
                h = ("X", p[1], (p[2] + 2) % 4)
            else:
                break
        out.append(Arc(tuple(run)))
    return out


def _arc_end(d: Diagram, key):
    """A half-edge departing from one end of the arc containing edge ``key``."""
    h = key
    first = h
    while h[0] == "X" and d.over_at(h):
        back = d.partner(("X", h[1], (h[2] + 2) % 4))
        h = back
        if h == first:  # a closed arc with no under-passage
            return first
    return h


def edge_colors_from_arcs(d: Diagram, arc_colors: Mapping) -> Coloring:
    """Expand a map arc id -> color into an edge coloring."""
    cols = {}
    for a in arcs(d):
        for k in a.edges:
            cols[k] = arc_colors[a.id]
    return Coloring(cols)


def arc_colors(d: Diagram, c: Coloring) -> dict:
    return {a.id: c.colors[a.edges[0]] for a in arcs(d)}


def _crossing_ok(d: Diagram, c: Coloring, cid) -> bool:
    ax = d.crossings[cid]
    col = lambda s: c.color_of(d, ("X", cid, s))
    o = col(ax)
    if col(ax + 2) != o:
        return False
    return col(3 - ax) == conjugate(col(1 - ax), o)


def validate_coloring(d: Diagram, c: Coloring) -> bool:
    try:
        for cid in d.crossings:
            if not _crossing_ok(d, c, cid):
                return False
        for b, content in d.disks.items():
            if content is not None:
                if len({c.color_of(d, h) for h in slots(("B", b))}) != 1:
                    return False
    except KeyError:
        return False
    return True


def is_transitive(c: Coloring) -> bool:
    return len(c.used()) >= 2


def crossing_colors(d: Diagram, c: Coloring, cid) -> set:
    return {c.color_of(d, ("X", cid, s)) for s in range(4)}


def is_three_colored(d: Diagram, c: Coloring, cid) -> bool:
    return len(crossing_colors(d, c, cid)) == 3


def group_orbits(perms: Iterable) -> list:
    perms = list(perms)
    orbits = []
    seen = set()
    for x in (1, 2, 3):
        if x in seen:
            continue
        orb, stack = {x}, [x]
        while stack:
            y = stack.pop()
            for p in perms:
                z = p[y - 1]
                if z not in orb:
                    orb.add(z)
                    stack.append(z)
        seen |= orb
        orbits.append(frozenset(orb))
    return orbits


@dataclass(frozen=True)
class Monodromy:
    product: tuple
    orbits: tuple

    @property
    def is_identity(self) -> bool:
        return self.product == (1, 2, 3)


def boundary_monodromy(d: Diagram, c: Coloring, disk) -> Monodromy:
    """Product of the leg transpositions around a disk (NE, NW, SW, SE) and the
    orbits of the group they generate."""
    legs = [c.color_of(d, h).perm() for h in slots(("B", disk))]
    orbits = tuple(sorted((tuple(sorted(o)) for o in group_orbits(legs)), key=lambda o: (-len(o), o)))
    return Monodromy(compose(*legs), orbits)


def cover_euler_characteristic(base_chi: int, degree: int, branch_cycle_counts) -> int:
    """Riemann-Hurwitz: ``p * chi - sum(p - c_i)`` where ``c_i`` counts the cycles
    (preimage points) over the i-th branch point."""
    if degree < 1:
        raise ValueError("degree must be at least 1")
    return degree * base_chi - sum(degree - ci for ci in branch_cycle_counts)


def bridge_cover_genus(b: int) -> int:
    """Genus of the simple 3-fold cover of a b-bridge sphere (2b simple branch points)."""
    if b < 2:
        raise BridgeTooSmall(f"bridge number must be at least 2, got {b}")
    chi = cover_euler_characteristic(2, 3, [2] * (2 * b))
    return (2 - chi) // 2


def pb_genus_bounds(g: int) -> tuple:
    if g < 0:
        raise ValueError("genus must be nonnegative")
    return g, 6 * g + 6


def max_degree_for_budget(volume) -> int:
    """Largest p with 2p < volume."""
    if volume <= 0:
        raise ValueError("volume budget must be positive")
    p = int(volume // 2)
    while 2 * p >= volume:
        p -= 1
    return max(p, 0)


# -- propagation and enumeration -------------------------------------------------

def propagate(d: Diagram, known: Mapping, strict_disks: bool = True) -> dict:
    """Extend a partial edge coloring by the crossing rules until nothing changes.

    Filled disks (and all disks when ``strict_disks``) force their legs to one
    color.  Raises :class:`ColoringConflict` on an inconsistency.  Edges that
    stay undetermined are left out.
    """
    cols = dict(known)
    key = d.edge_key
    # vertices as tuples of edge keys: crossings as (over1, over2, under1, under2)
    rules = []
    touching = {}
    for cid, ax in d.crossings.items():
        ks = (key(("X", cid, ax)), key(("X", cid, ax + 2)),
              key(("X", cid, 1 - ax)), key(("X", cid, 3 - ax)))
        rules.append(("X", ks))
    for b, content in d.disks.items():
        if content is None and not strict_disks:
            continue
        rules.append(("B", tuple(key(h) for h in slots(("B", b)))))
    for i, (_, ks) in enumerate(rules):
        for k in ks:
            touching.setdefault(k, []).append(i)

    queue = list(range(len(rules)))
    queued = set(queue)

    def setc(k, col):
        old = cols.get(k)
        if old is None:
            cols[k] = col
            for i in touching.get(k, ()):
                if i not in queued:
                    queued.add(i)
                    queue.append(i)
        elif old != col:
            raise ColoringConflict(f"edge {k}: {old.value} vs {col.value}")

    while queue:
        i = queue.pop()
        queued.discard(i)
        kind, ks = rules[i]
        if kind == "B":
            got = [cols[k] for k in ks if k in cols]
            if got:
                for k in ks:
                    setc(k, got[0])
            continue
        o1, o2, u1k, u2k = ks
        o = cols.get(o1) or cols.get(o2)
        u1, u2 = cols.get(u1k), cols.get(u2k)
        if o is not None:
            setc(o1, o)
            setc(o2, o)
            if u1 is not None:
                setc(u2k, conjugate(u1, o))
            elif u2 is not None:
                setc(u1k, conjugate(u2, o))
        elif u1 is not None and u2 is not None and u1 != u2:
            setc(o1, third(u1, u2))
    return cols


def enumerate_simple3_colorings(d: Diagram, boundary_constraints: Optional[Mapping] = None,
                                strict_disks: bool = False) -> list:
    """All edge colorings satisfying the crossing relation (and constraints).

    ``boundary_constraints`` maps half-edges to colors.  Filled disks always
    force single-colored legs; ``strict_disks`` extends that to empty disks.
    Search is over arcs, most-constrained first, with propagation.
    """
    arc_list = arcs(d)
    edge_keys = [d.edge_key(h) for h, _ in d.edges()]
    start = {}
    for h, col in (boundary_constraints or {}).items():
        k = d.edge_key(h)
        if start.get(k, col) != col:
            return []
        start[k] = Color(col)
    results = []

    def rec(cols):
        try:
            cols = propagate(d, cols, strict_disks=strict_disks)
        except ColoringConflict:
            return
        for a in arc_list:
            if a.edges[0] not in cols:
                for col in COLORS:
                    nxt = dict(cols)
                    nxt[a.edges[0]] = col
                    for k in a.edges:
                        nxt[k] = col
                    rec(nxt)
                return
        c = Coloring({k: cols[k] for k in edge_keys})
        if validate_coloring(d, c):
            results.append(c)

    rec(start)
    return results
