"""Diagram rewrites that preserve the colored branched cover.

Every move returns a new diagram, an updated coloring and a
:class:`MoveReceipt`.  Colors on untouched edges are carried over; colors of
new edges are forced by the crossing relation from the carried ones.

Local pictures use *frames*: four outside half-edges ``[BL, BR, TR, TL]``
listed counterclockwise around a small region.  A horizontal twist region in
a frame joins BL/TL on the left to BR/TR on the right; its sign is positive
when the over-strands run from bottom-left to top-right.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import diagram as dg
from .covers import (Coloring, ColoringConflict, boundary_monodromy, conjugate,
                     is_three_colored, propagate, third)
from .diagram import Diagram, DiagramError, Fragment, slots, splice, vertex_of


class MoveError(DiagramError):
    pass


class OneColoredSite(MoveError):
    pass


class SameColorZeroSite(MoveError):
    pass


class PathBlocked(MoveError):
    pass


class EndpointOnDisk(MoveError):
    pass


class NoValidPath(MoveError):
    pass


class MinusInsideDisk(MoveError):
    pass


@dataclass(frozen=True)
class MoveSite:
    kind: str  # CrossingSite, TwoStrandSite, DiskSite, SegmentSite, ArcSite
    anchors: tuple


@dataclass
class MoveReceipt:
    name: str
    site: MoveSite
    before: dict
    after: dict
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {"move": self.name, "site": {"kind": self.site.kind, "anchors": repr(self.site.anchors)},
                "before": self.before, "after": self.after, **({"detail": self.detail} if self.detail else {})}


def one_colored_count(d: Diagram, c: Coloring) -> int:
    return sum(1 for x in d.crossings if not is_three_colored(d, c, x))


def measures(d: Diagram, c: Optional[Coloring]) -> dict:
    out = {"prime_measure": dg.prime_measure(d), "crossings": len(d.crossings)}
    if c is not None:
        out["one_colored"] = one_colored_count(d, c)
    try:
        out["components"] = dg.component_count(d)
    except dg.UnfilledDisk:
        out["components"] = None
    return out


def _monodromies(d, c):
    return {b: boundary_monodromy(d, c, b) for b in d.disks}


def _receipt(name, site, d0, c0, d1, c1, **detail):
    if c0 is not None and _monodromies(d0, c0) != _monodromies(d1, c1):
        raise MoveError(f"{name} changed a disk boundary monodromy")
    return MoveReceipt(name, site, measures(d0, c0), measures(d1, c1), detail)


def transfer_coloring(old: Diagram, c: Optional[Coloring], new: Diagram) -> Optional[Coloring]:
    """Carry colors across a splice and fill in the new edges."""
    if c is None:
        return None
    known = {}
    for h, p in new.edges():
        for x in (h, p):
            if x in old.pairing:
                col = c.color_of(old, x)
                k = new.edge_key(x)
                if known.get(k, col) != col:
                    raise ColoringConflict(f"edge {k} joins differently colored pieces")
                known[k] = col
    cols = propagate(new, known, strict_disks=False)
    keys = [h for h, _ in new.edges()]
    missing = [k for k in keys if k not in cols]
    if missing:
        raise ColoringConflict(f"coloring undetermined on {len(missing)} new edge(s)")
    out = Coloring({k: cols[k] for k in keys})
    return out


# -- local fragments -------------------------------------------------------------

def twist_fragment(n: int) -> Fragment:
    """``|n|`` half-twists between the bottom and top strands of a frame.

    Crossing slots are [LB, RB, RT, LT]; ``n > 0`` puts the over-strands on the
    LB-RT axis.  ``n = 0`` joins BL-BR and TL-TR.
    """
    P = lambda k: ("P", k, 0)
    if n == 0:
        return Fragment((), ((P(0), P(1)), (P(2), P(3))), 4)
    m, axis = abs(n), (0 if n > 0 else 1)
    pairs = [(P(0), ("X", 1, 0)), (P(3), ("X", 1, 3))]
    for k in range(1, m):
        pairs.append((("X", k, 1), ("X", k + 1, 0)))
        pairs.append((("X", k, 2), ("X", k + 1, 3)))
    pairs.append((("X", m, 1), P(1)))
    pairs.append((("X", m, 2), P(2)))
    return Fragment(tuple((k, axis) for k in range(1, m + 1)), tuple(pairs), 4)


def _boundary_for(d: Diagram, removed: set, region_slots: list) -> list:
    """Outside half-edges facing ``region_slots``; internal joins become placeholders."""
    pos = {h: k for k, h in enumerate(region_slots)}
    out = []
    for h in region_slots:
        o = d.pairing[h]
        if vertex_of(o) in removed:
            if o not in pos:
                raise MoveError("region is not a disk with four ends")
            out.append(("P", pos[o], 0))
        else:
            out.append(o)
    return out


def crossing_sign(d: Diagram, cid, s: int) -> int:
    """Sign of crossing ``cid`` viewed as a one-crossing twist in frame ``s``."""
    return 1 if d.crossings[cid] == s % 2 else -1


def twist_chain(d: Diagram, cid, s: int, length: int) -> list:
    """Crossings ``[(cid, s), ...]`` of a horizontal twist region in frame ``s``."""
    chain = [(cid, s)]
    sign = crossing_sign(d, cid, s)
    while len(chain) < length:
        x, t = chain[-1]
        r1, r2 = d.pairing[("X", x, (t + 1) % 4)], d.pairing[("X", x, (t + 2) % 4)]
        if r1[0] != "X" or r1[1] != r2[1] or r1[1] in {y for y, _ in chain}:
            raise MoveError("not a twist region of the requested length")
        t2 = r1[2]
        if r2[2] != (t2 + 3) % 4 or crossing_sign(d, r1[1], t2) != sign:
            raise MoveError("not a twist region of the requested length")
        chain.append((r1[1], t2))
    return chain


def twist_site(d: Diagram, cid, s: int, length: int = 1) -> MoveSite:
    twist_chain(d, cid, s, length)
    return MoveSite("TwoStrandSite", ("twist", cid, s % 4, length))


def edge_pair_site(d: Diagram, h1, h2) -> MoveSite:
    fi = d.face_index()
    if fi[h1] != fi[h2] or d.edge_key(h1) == d.edge_key(h2):
        raise MoveError("edge-pair site needs two distinct edges on one face")
    return MoveSite("TwoStrandSite", ("edges", h1, h2))


def _site_region(d: Diagram, site: MoveSite):
    """(removed vertices, boundary, n, port half-edges) of a two-strand site."""
    kind = site.anchors[0]
    if kind == "edges":
        _, h1, h2 = site.anchors
        ports = [h1, d.pairing[h1], h2, d.pairing[h2]]
        return set(), ports, 0, ports
    _, cid, s, length = site.anchors
    chain = twist_chain(d, cid, s, length)
    n = crossing_sign(d, cid, s) * length
    removed = {("X", x) for x, _ in chain}
    (x0, t0), (x1, t1) = chain[0], chain[-1]
    region = [("X", x0, t0), ("X", x1, (t1 + 1) % 4), ("X", x1, (t1 + 2) % 4), ("X", x0, (t0 + 3) % 4)]
    if length == 1:
        region = [("X", x0, (t0 + i) % 4) for i in range(4)]
    boundary = _boundary_for(d, removed, region)
    return removed, boundary, n, region


def site_port_colors(d: Diagram, c: Coloring, site: MoveSite) -> list:
    """Colors just outside the four ends of a site, counterclockwise from BL."""
    removed, boundary, n, region = _site_region(d, site)
    return [c.color_of(d, h) for h in region]


def montesinos_move(d: Diagram, c: Optional[Coloring], site: MoveSite, n: int, k: int):
    """Replace the site's ``n`` half-twists by ``n + 3k``."""
    removed, boundary, n_site, region = _site_region(d, site)
    if n_site != n:
        raise MoveError(f"site carries {n_site} half-twists, not {n}")
    if c is not None:
        if n != 0:
            for v in removed:
                if not is_three_colored(d, c, v[1]):
                    raise OneColoredSite(f"crossing {v[1]} is one-colored")
        else:
            h1, h2 = region[0], region[2]
            if c.color_of(d, h1) == c.color_of(d, h2):
                raise SameColorZeroSite("the two strands have the same color")
    new, relabel = splice(d, removed, boundary, twist_fragment(n + 3 * k))
    c2 = transfer_coloring(d, c, new)
    return new, c2, _receipt("montesinos", site, d, c, new, c2, n=n, k=k,
                             new_crossings=sorted(relabel.values()))


# -- fingers (Reidemeister II) -------------------------------------------------------

def _finger_fragment(over: bool) -> Fragment:
    # crossings a (left) and b (right), slots E=0, N=1, W=2, S=3
    P = lambda k: ("P", k, 0)
    pairs = ((("X", 1, 0), ("X", 2, 2)), (("X", 1, 2), P(3)), (("X", 1, 3), P(0)),
             (("X", 1, 1), ("X", 2, 1)), (("X", 2, 0), P(2)), (("X", 2, 3), P(1)))
    axis = 1 if over else 0
    return Fragment(((1, axis), (2, axis)), pairs, 4)


def finger1(d: Diagram, base, target, over: bool, split_ok: bool = False):
    """Push the edge of ``base`` across the edge of ``target``.

    Both half-edges must have the same face on their left, unless ``split_ok``
    and they lie in different projection components (a split component may be
    placed in any face of another).  Returns
    ``(diagram, tip)`` where ``tip`` is the half-edge starting the finger's tip
    edge; its left face is the face beyond the crossed edge.
    """
    fi = d.face_index()
    if fi[base] != fi[target] and not (split_ok and _component_of(d, base) != _component_of(d, target)):
        raise PathBlocked("finger endpoints are not on a common face")
    if d.edge_key(base) == d.edge_key(target):
        raise PathBlocked("cannot push an edge across itself")
    ports = [base, d.pairing[base], target, d.pairing[target]]
    new, relabel = splice(d, set(), ports, _finger_fragment(over))
    return new, ("X", relabel[1], 1)


def _component_of(d: Diagram, h) -> int:
    v = vertex_of(h)
    for i, comp in enumerate(d.projection_components()):
        if v in comp:
            return i
    raise KeyError(h)


def finger(d: Diagram, c: Optional[Coloring], base, targets, overs):
    """Push a finger from ``base`` successively across the edges in ``targets``.

    ``targets`` are edge keys of ``d``; at each step the half-edge of the edge
    lying on the current tip face is used.  Returns (diagram, coloring, tip,
    new crossing ids).
    """
    cur, tip, made = d, base, []
    for key, over in zip(targets, overs):
        fi = cur.face_index()
        here = fi[tip]
        cand = [h for h in (key, cur.pairing[key]) if fi[h] == here]
        split = False
        if not cand and _component_of(cur, tip) != _component_of(cur, key):
            cand, split = [key], True
        if not cand:
            raise PathBlocked(f"edge {key} is not on the finger's face")
        before = set(cur.crossings)
        cur, tip = finger1(cur, tip, cand[0], over, split_ok=split)
        made.extend(sorted(set(cur.crossings) - before))
    return cur, transfer_coloring(d, c, cur), tip, made


def _dual_path(d: Diagram, start_face, goal, allowed=None, banned_faces=()):
    """Shortest face path from ``start_face``; returns the crossed edge keys.

    ``goal(face)`` decides arrival; ``allowed(edge_key)`` filters crossable
    edges.
    """
    from collections import deque
    orbits = d.face_orbits()
    fi = d.face_index()
    prev = {start_face: None}
    dq = deque([start_face])
    while dq:
        f = dq.popleft()
        if goal(f):
            path = []
            while prev[f] is not None:
                f, key = prev[f]
                path.append(key)
            return path[::-1]
        for h in orbits[f]:
            key = d.edge_key(h)
            if allowed is not None and not allowed(key):
                continue
            g = fi[d.pairing[h]]
            if g not in prev and g not in banned_faces:
                prev[g] = (f, key)
                dq.append(g)
    return None


def alpha_isotopy(d: Diagram, c: Optional[Coloring], site: MoveSite, over: bool = True):
    """Finger one strand along an arc of faces until it crosses another strand.

    ``site.anchors = (base, targets)``: the finger starts on half-edge ``base``
    and crosses the edges ``targets`` in order; the last one is the strand
    being reached.
    """
    base, targets = site.anchors
    if not targets:
        raise PathBlocked("empty arc")
    pc0 = len(d.projection_components())
    new, c2, tip, made = finger(d, c, base, list(targets), [over] * len(targets))
    rec = _receipt("alpha_isotopy", site, d, c, new, c2, new_crossings=made)
    rec.detail["projection_components"] = [pc0, len(new.projection_components())]
    return new, c2, rec


def connecting_arc(d: Diagram):
    """A face shared by two projection components and a half-edge of each on it."""
    comps = d.projection_components()
    if len(comps) < 2:
        return None
    comp_of = {}
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    # separate components share no face of the map; one may be placed in
    # any face of the other, so any edge of each will do
    firsts = {}
    for h, _ in d.edges():
        firsts.setdefault(comp_of[vertex_of(h)], h)
    return MoveSite("ArcSite", (firsts[0], (d.edge_key(firsts[1]),)))


# -- checkerboard types and alternation -------------------------------------------

def checkerboard(d: Diagram) -> dict:
    """Two-color the faces (face index -> 0/1) so that neighbours differ."""
    orbits = d.face_orbits()
    fi = d.face_index()
    shade = {}
    for start in range(len(orbits)):
        if start in shade:
            continue
        shade[start] = 0
        stack = [start]
        while stack:
            f = stack.pop()
            for h in orbits[f]:
                g = fi[d.pairing[h]]
                if g not in shade:
                    shade[g] = 1 - shade[f]
                    stack.append(g)
                elif shade[g] == shade[f]:
                    raise DiagramError("faces are not two-colorable")
    return shade


def crossing_types(d: Diagram) -> dict:
    """Shade of the face clockwise-before the over-strand at each crossing.

    A connected diagram is alternating exactly when all crossings share one type.
    """
    shade = checkerboard(d)
    fi = d.face_index()
    return {x: shade[fi[("X", x, ax)]] for x, ax in d.crossings.items()}


def _target_type(d: Diagram):
    flat, origin = dg.expand(d)
    types = crossing_types(flat)
    inside = {types[x] for x in origin}
    if len(inside) > 1:
        raise MinusInsideDisk("disk tangles disagree on the alternating type")
    outer = [types[x] for x in d.crossings]
    if inside:
        return inside.pop(), types
    if not outer:
        return 0, types
    return max((outer.count(0), 0), (outer.count(1), 1))[1], types


def make_alternating(d: Diagram, c: Optional[Coloring]):
    """Replace each crossing of the wrong type by two of the opposite sign.

    Each replacement is the Montesinos move ``sigma -> sigma - 3 sigma`` on a
    single three-colored crossing; they are applied together and reported as
    one receipt listing the crossings changed.
    """
    target, types = _target_type(d)
    wrong = [x for x in sorted(d.crossings) if types[x] != target]
    if not wrong:
        return d, c, []
    if c is not None:
        for x in wrong:
            if not is_three_colored(d, c, x):
                raise OneColoredSite(f"crossing {x} is one-colored")
    cur, c2, made = d, c, []
    for x in wrong:
        sigma = crossing_sign(cur, x, 0)
        removed, boundary, _, _ = _site_region(cur, twist_site(cur, x, 0, 1))
        nxt, relabel = splice(cur, removed, boundary, twist_fragment(-2 * sigma), check=False)
        # one splice at a time: neighbouring replacements would otherwise
        # leave edges with no colored end to propagate from
        c2 = transfer_coloring(cur, c2, nxt)
        cur = nxt
        made.extend(sorted(relabel.values()))
    cur.validate()
    if not dg.is_alternating(cur):
        raise MoveError("make_alternating did not produce an alternating diagram")
    site = MoveSite("CrossingSet", tuple(wrong))
    rec = _receipt("make_alternating", site, d, c, cur, c2, new_crossings=made)
    return cur, c2, [rec]


# -- knotting --------------------------------------------------------------------

def _outer_strand_labels(d: Diagram) -> dict:
    """Edge key of ``d`` -> component index of the expanded diagram."""
    flat, _ = dg.expand(d)
    comp = dg.strand_components(flat)
    out = {}
    for h, p in d.edges():
        for x in (h, p):
            if x[0] == "X":
                out[d.edge_key(h)] = comp[flat.edge_key(x)]
                break
        else:
            # a leg-to-leg edge: find it through the inlined tangles
            out[d.edge_key(h)] = None
    return out


def _mixed_crossings(d: Diagram) -> list:
    labels = _outer_strand_labels(d)
    out = []
    for x, ax in sorted(d.crossings.items()):
        a = labels[d.edge_key(("X", x, ax))]
        b = labels[d.edge_key(("X", x, 1 - ax))]
        if a is not None and b is not None and a != b:
            out.append(x)
    return out


def _conditions_ok(d: Diagram) -> bool:
    return (len(d.projection_components()) == 1 and dg.prime_measure(d) == 0
            and dg.disk_arc_condition(d))


def knotify(d: Diagram, c: Optional[Coloring], keep=None):
    """Merge link components until one is left, keeping alternation.

    ``keep(d)`` is an extra acceptance test for candidate results (by default
    the earlier hyperbolicity conditions).
    """
    keep = keep or _conditions_ok
    receipts = []
    while dg.component_count(d) > 1:
        done = False
        for x in _mixed_crossings(d):
            sigma = crossing_sign(d, x, 0)
            new, c2, rec = montesinos_move(d, c, twist_site(d, x, 0, 1), sigma, sigma)
            if dg.is_alternating(new) and keep(new):
                rec.name = "knotify"
                d, c, done = new, c2, True
                receipts.append(rec)
                break
        if not done:
            for new, c2, rec in _zero_sites(d, c):
                if dg.is_alternating(new) and keep(new):
                    rec.name = "knotify"
                    d, c, done = new, c2, True
                    receipts.append(rec)
                    break
        if not done:
            raise NoValidPath("no knotting site keeps the conditions")
    return d, c, receipts


def _zero_sites(d: Diagram, c: Optional[Coloring]):
    labels = _outer_strand_labels(d)
    for orb in d.face_orbits():
        for i, h1 in enumerate(orb):
            for h2 in orb[i + 1:]:
                k1, k2 = d.edge_key(h1), d.edge_key(h2)
                if k1 == k2 or labels[k1] is None or labels[k2] is None or labels[k1] == labels[k2]:
                    continue
                if c is not None and c.color_of(d, h1) == c.color_of(d, h2):
                    continue
                site = MoveSite("TwoStrandSite", ("edges", h1, h2))
                for k in (1, -1):
                    try:
                        yield montesinos_move(d, c, site, 0, k)
                    except DiagramError:
                        continue


# -- disks ---------------------------------------------------------------------------

def is_isolated(d: Diagram, disk) -> bool:
    """No arc from the disk meeting the diagram at most twice does anything
    but run around the disk's own legs."""
    fi = d.face_index()
    if len({fi[("B", disk, k)] for k in range(4)}) != 4:
        return False
    return not dg.disk_arc_violations(d, only=disk)


def _ring_closes(d: Diagram, disk) -> bool:
    """The ring around ``disk`` is complete: short arcs from it neither come
    back to it nor reach anything after a single crossing.  (Arcs to disks
    without a ring of their own are cut when those get one.)"""
    fi = d.face_index()
    if len({fi[("B", disk, k)] for k in range(4)}) != 4:
        return False
    return not any(end[0] == disk or len(path) < 2
                   for _, end, path in dg.disk_arc_violations(d, only=disk))


def isolate_disk(d: Diagram, c: Optional[Coloring], disk, prefer_colors: bool = True):
    """Surround a disk by a finger that crosses each of its legs twice.

    The finger is pushed out of one leg and around the disk, finishing across
    the same leg, so every corner face is closed off by the ring.  Other
    starting edges next to the disk are tried when no leg works.
    """
    site = MoveSite("DiskSite", (disk,))
    if is_isolated(d, disk):
        return d, c, _receipt("isolate_disk", site, d, c, d, c, skipped=True)
    last_err = None
    for base, start in _ring_sources(d, c, disk, prefer_colors):
        try:
            cur, tip, made = d, base, []
            for j in range(1, 5):
                leg = (start + j) % 4
                target = cur.pairing[("B", disk, leg)]
                before = set(cur.crossings)
                cur, tip = finger1(cur, tip, target, True)
                made.extend(sorted(set(cur.crossings) - before))
            if not _ring_closes(cur, disk):
                raise PathBlocked("the ring leaves a short arc out of the disk")
            c2 = transfer_coloring(d, c, cur)
        except DiagramError as exc:
            last_err = exc
            continue
        return cur, c2, _receipt("isolate_disk", site, d, c, cur, c2, new_crossings=made)
    raise NoValidPath(f"cannot isolate disk {disk}: {last_err}")


def _ring_sources(d: Diagram, c, disk, prefer_colors):
    fi = d.face_index()
    orbits = d.face_orbits()
    legs = set(slots(("B", disk)))
    leg_keys = {d.edge_key(h) for h in legs}
    leg_color = c.color_of(d, ("B", disk, 0)) if c is not None else None
    out = [(("B", disk, k), k) for k in range(4)]
    if prefer_colors and c is not None:
        for k in range(4):
            for h in orbits[fi[("B", disk, k)]]:
                if d.edge_key(h) in leg_keys or h in legs:
                    continue
                if c.color_of(d, h) != leg_color:
                    out.append((h, k))
    return out


def disk_flip(d: Diagram, c: Optional[Coloring], disk, chirality: int = 1, source=None):
    """Sweep a nearby strand across the ball around a disk.

    An arc lying in a corner face of the disk is lifted over the ball (under
    it when ``chirality`` is negative) and laid down on the far side, so it now
    runs once around the disk and crosses every leg exactly once.  Each leg
    strand gains one crossing while keeping its end at the tangle, which
    toggles the strand-graph sign of every non-loop edge at this disk; loops
    gain two crossings and the swept strand four.

    When the swept strand is colored differently from the legs, every color
    inside the loop is conjugated by the strand's color (the disk stays single
    colored, with the conjugated color).  ``source`` forces the swept
    half-edge; by default one colored like the legs is preferred.
    """
    sources = [source] if source is not None else _sweep_sources(d, c, disk)
    last = None
    for e, k in sources:
        try:
            new, made = _sweep(d, disk, e, k, chirality)
            c2 = _lasso_coloring(d, c, new, ("B", disk))
        except DiagramError as exc:
            last = exc
            continue
        site = MoveSite("DiskSite", (disk,))
        rec = MoveReceipt("disk_flip", site, measures(d, c), measures(new, c2),
                          {"chirality": chirality, "swept": e, "new_crossings": made})
        if c is not None:
            m0, m1 = boundary_monodromy(d, c, disk), boundary_monodromy(new, c2, disk)
            if sorted(map(len, m0.orbits)) != sorted(map(len, m1.orbits)) or not m1.is_identity:
                raise MoveError("disk_flip changed the cover over the disk")
        return new, c2, rec
    raise NoValidPath(f"no strand next to disk {disk} can be swept: {last}")


def _sweep_sources(d: Diagram, c, disk):
    fi = d.face_index()
    orbits = d.face_orbits()
    leg_keys = {d.edge_key(("B", disk, k)) for k in range(4)}
    leg_color = c.color_of(d, ("B", disk, 0)) if c is not None else None
    same, other = [], []
    for k in range(4):
        for h in orbits[fi[("B", disk, k)]]:
            if d.edge_key(h) in leg_keys:
                continue
            if c is None or c.color_of(d, h) == leg_color:
                same.append((h, k))
            else:
                other.append((h, k))
    return same + other


def _sweep(d: Diagram, disk, e, k, chirality):
    return _lasso(d, ("B", disk), e, k, [chirality > 0] * 4)


def _lasso(d: Diagram, v, e, k, overs):
    """Reroute the edge of ``e`` (on corner face ``k`` of vertex ``v``) once
    around ``v``, crossing its four edges; ``overs[j]`` says whether the new
    arc passes over edge ``j``."""
    kind, vid = v
    fi = d.face_index()
    if fi[e] != fi[(kind, vid, k)]:
        raise PathBlocked("rerouted edge is not on the corner face")
    legs = [(kind, vid, j) for j in range(4)]
    if d.edge_key(e) in {d.edge_key(h) for h in legs}:
        raise PathBlocked("cannot reroute an edge of the vertex itself")
    pairing = dict(d.pairing)
    crossings = dict(d.crossings)
    base = d.next_id()
    # crossing on edge j: slots 0 away from v, 1 back along the arc,
    # 2 toward v, 3 forward along the arc (which runs clockwise)
    order = [(k - t) % 4 for t in range(4)]
    xid = {j: base + t for t, j in enumerate(order)}
    for j in order:
        crossings[xid[j]] = 1 if overs[j] else 0
    link = {}

    def join(a, b):
        link[a] = b
        link[b] = a

    for j in range(4):
        join(("X", xid[j], 2), legs[j])
        o = d.pairing[legs[j]]
        if o[0] == kind and o[1] == vid:
            join(("X", xid[j], 0), ("X", xid[o[2]], 0))
        else:
            join(("X", xid[j], 0), o)
    join(e, ("X", xid[order[0]], 1))
    for t in range(3):
        join(("X", xid[order[t]], 3), ("X", xid[order[t + 1]], 1))
    join(("X", xid[order[3]], 3), d.pairing[e])
    for h in [h for h, p in pairing.items() if h in link or p in link]:
        del pairing[h]
    pairing.update(link)
    return Diagram(crossings, d.disks, pairing), sorted(xid.values())


def _lasso_coloring(d, c, new, v):
    """Colors after a lasso around ``v``: everything away from ``v`` keeps its
    color and the pieces inside the lasso follow from the crossing rule."""
    if c is None:
        return None
    known = {}
    for h, p in new.edges():
        for x in (h, p):
            if x in d.pairing and vertex_of(x) != v:
                known[new.edge_key(x)] = c.color_of(d, x)
    cols = propagate(new, known, strict_disks=False)
    keys = [h for h, _ in new.edges()]
    if any(k not in cols for k in keys):
        raise ColoringConflict("lasso leaves edges uncolored")
    return Coloring({k: cols[k] for k in keys})


# -- primeness -----------------------------------------------------------------------

def segment_pair_sites(d: Diagram) -> list:
    """SegmentSites ``(e1, e2)``: two edges separating the same two faces."""
    fi = d.face_index()
    by = {}
    for h, p in d.edges():
        by.setdefault(frozenset((fi[h], fi[p])), []).append(h)
    out = []
    for pair, hs in sorted(by.items(), key=lambda kv: sorted(kv[0])):
        for i in range(len(hs)):
            for j in range(i + 1, len(hs)):
                out.append(MoveSite("SegmentSite", (hs[i], hs[j])))
    return out


def _finger_candidates(d: Diagram, c, e1, e2):
    """Half-edge pairs (a, b) on one face, on the two arcs between e1 and e2."""
    fi = d.face_index()
    orbits = d.face_orbits()
    out = []
    # first choice: cut off a triangle holding just one of the two segments,
    # by a finger between the boundary edges on either side of it
    for e in (e1, e2):
        for x in (e, d.pairing[e]):
            orb = orbits[fi[x]]
            i = orb.index(x)
            a, b = orb[i - 1], orb[(i + 1) % len(orb)]
            if len(orb) > 2 and d.edge_key(a) != d.edge_key(b):
                out.append((a, b))
                out.append((b, a))
    first = len(out)
    for x1 in (e1, d.pairing[e1]):
        f = fi[x1]
        orb = orbits[f]
        x2s = [x for x in (e2, d.pairing[e2]) if fi[x] == f]
        if not x2s:
            continue
        i, j = orb.index(x1), orb.index(x2s[0])
        if i > j:
            i, j = j, i
        arc1 = orb[i + 1:j]
        arc2 = orb[j + 1:] + orb[:i]
        ends = {d.edge_key(e1), d.edge_key(e2)}
        for a in arc1:
            for b in arc2:
                if d.edge_key(a) in ends or d.edge_key(b) in ends or d.edge_key(a) == d.edge_key(b):
                    continue
                out.append((a, b))
                out.append((b, a))

    def rank(ab):
        a, b = ab
        diff = c is not None and c.color_of(d, a) != c.color_of(d, b)
        on_disk = any(x[0] == "B" or d.pairing[x][0] == "B" for x in ab)
        return (not diff, on_disk)

    return out[:first] + sorted(out[first:], key=rank)


def reduce_segment_pair(d: Diagram, c: Optional[Coloring], site: MoveSite, keep=None):
    """Separate two edges that bound the same two faces by a finger move.

    A finger pushed across one of the faces, from one boundary arc between the
    two edges to the other, puts them on different faces.  The first candidate
    that lowers the prime measure (and passes ``keep``) is used.
    """
    e1, e2 = site.anchors
    for e in (e1, e2):
        if e[0] == "B" or d.pairing[e][0] == "B":
            raise EndpointOnDisk(f"segment {d.edge_key(e)} ends on a disk")
    m0 = dg.prime_measure(d)
    for a, b in _finger_candidates(d, c, e1, e2):
        for over in (True, False):
            try:
                new, _ = finger1(d, a, b, over)
            except DiagramError:
                continue
            if dg.prime_measure(new) >= m0:
                continue
            if keep is not None and not keep(new):
                continue
            c2 = transfer_coloring(d, c, new)
            return new, c2, _receipt("reduce_segment_pair", site, d, c, new, c2, finger=(a, b, over))
    raise NoValidPath("no finger lowers the prime measure here")


# -- three-colored crossings ---------------------------------------------------------

def three_color_paths(d: Diagram, c: Coloring, x):
    """Finger routes ``(base, crossed edge keys, corner)`` toward crossing ``x``.

    Routes cross only edges colored like ``x`` and start on an edge of another
    color; shorter routes first.
    """
    from collections import deque
    alpha = c.color_of(d, ("X", x, 0))
    fi = d.face_index()
    orbits = d.face_orbits()
    arms = {d.edge_key(("X", x, s)) for s in range(4)}
    corner_of = {}
    for s in range(4):
        corner_of.setdefault(fi[("X", x, s)], s)
    prev = {f: None for f in corner_of}
    dq = deque(corner_of)
    found = []
    while dq:
        f = dq.popleft()
        for h in orbits[f]:
            key = d.edge_key(h)
            if c.colors[key] != alpha and key not in arms:
                path, g = [], f
                while prev[g] is not None:
                    g, k2 = prev[g]
                    path.append(k2)
                # path runs from f back to a corner face
                found.append((h, tuple(path), corner_of[g]))
        for h in orbits[f]:
            key = d.edge_key(h)
            if key in arms or c.colors[key] != alpha:
                continue
            g = fi[d.pairing[h]]
            if g not in prev:
                prev[g] = (f, key)
                dq.append(g)
    return found


def three_color_crossing_move(d: Diagram, c: Coloring, x, path=None, keep=None):
    """Make the one-colored crossing ``x`` three-colored.

    A strand of another color is fingered along ``path`` (over edges colored
    like ``x``) into a corner face of ``x``, and its tip is then looped once
    around ``x``: over the two under-strand arms and under the two
    over-strand arms.  The loop lies between the two strands of ``x`` and
    bounds a disk there, so the move is an isotopy; it recolors the arms
    inside the loop.
    """
    if is_three_colored(d, c, x):
        raise MoveError(f"crossing {x} is already three-colored")
    if ("X", x, 0) not in d.pairing:
        raise MoveError(f"no crossing {x}")
    routes = [path] if path is not None else three_color_paths(d, c, x)
    before = one_colored_count(d, c)
    ax = d.crossings[x]
    overs = [(j % 2) != ax for j in range(4)]
    for base, crossed, s in routes:
        try:
            mid, c1, tip, made = finger(d, c, base, list(crossed), [True] * len(crossed))
            new, loop = _lasso(mid, ("X", x), tip, s, overs)
            c2 = _lasso_coloring(mid, c1, new, ("X", x))
        except DiagramError:
            continue
        made = made + loop
        if not is_three_colored(new, c2, x):
            continue
        if any(not is_three_colored(new, c2, y) for y in made):
            continue
        if one_colored_count(new, c2) >= before:
            continue
        if keep is not None and not keep(new):
            continue
        site = MoveSite("CrossingSite", (x, base, crossed, s))
        return new, c2, _receipt("three_color_crossing", site, d, c, new, c2, new_crossings=made)
    raise NoValidPath(f"no route makes crossing {x} three-colored")
