"""Link and tangle diagrams on the 2-sphere as combinatorial maps.

A diagram has two kinds of 4-valent vertices: crossings (``'X'``) and disks
(``'B'``).  A half-edge is a triple ``(kind, vertex_id, slot)``; the four slots
of every vertex are in counterclockwise order.  For a crossing, ``over_axis``
names the opposite slot pair carrying the over-strand (0 -> slots {0, 2},
1 -> slots {1, 3}).  Disk slots are the legs NE=0, NW=1, SW=2, SE=3.

Faces are traced counterclockwise: leaving a vertex along half-edge ``h`` the
face lies on the left, and the successor of ``h`` is the slot clockwise from
where the edge arrives.  The face "of" a half-edge is therefore the corner
between slots ``s`` and ``s + 1`` at its vertex.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

HalfEdge = tuple  # (kind: str, vertex_id: int, slot: int)
Vertex = tuple  # (kind, vertex_id)

LEG_NAMES = ("NE", "NW", "SW", "SE")
LEG_INDEX = {name: i for i, name in enumerate(LEG_NAMES)}


class DiagramError(ValueError):
    """Base class for invalid diagram input."""


class MalformedPairing(DiagramError):
    pass


class NonSphere(DiagramError):
    pass


class FreeLoop(DiagramError):
    pass


class UnfilledDisk(DiagramError):
    pass


def vertex_of(h: HalfEdge) -> Vertex:
    return (h[0], h[1])


def slots(v: Vertex) -> list:
    return [(v[0], v[1], s) for s in range(4)]


class Diagram:
    """Immutable combinatorial map; see the module docstring for conventions.

    ``disks`` maps a disk id to its content: ``None`` for an empty disk or a
    :class:`~linkvol.tangles.Slope` naming the rational tangle inside.
    """

    __slots__ = ("crossings", "disks", "pairing", "_cache")

    def __init__(self, crossings: Mapping[int, int], disks: Mapping[int, object],
                 pairing: Mapping[HalfEdge, HalfEdge], check: bool = True):
        self.crossings = dict(crossings)
        self.disks = dict(disks)
        self.pairing = dict(pairing)
        self._cache = {}
        if check:
            self.validate()

    # -- structure ---------------------------------------------------------
    def vertices(self) -> list:
        return [("X", c) for c in sorted(self.crossings)] + \
               [("B", b) for b in sorted(self.disks)]

    def half_edges(self) -> list:
        return [h for v in self.vertices() for h in slots(v)]

    def partner(self, h: HalfEdge) -> HalfEdge:
        return self.pairing[h]

    def edges(self) -> list:
        """Each edge once, as ``(h, partner)`` with ``h < partner``."""
        return sorted((h, p) for h, p in self.pairing.items() if h < p)

    def edge_key(self, h: HalfEdge) -> HalfEdge:
        keys = self._cache.get("keys")
        if keys is None:
            keys = self._cache["keys"] = {h: min(h, p) for h, p in self.pairing.items()}
        return keys[h]

    def is_crossing(self, h: HalfEdge) -> bool:
        return h[0] == "X"

    def over_at(self, h: HalfEdge) -> bool:
        """True when the strand through crossing half-edge ``h`` is the over-strand."""
        return h[2] % 2 == self.crossings[h[1]]

    def next_id(self) -> int:
        return max(self.crossings, default=0) + 1

    def validate(self):
        hs = set(self.half_edges())
        for h, p in self.pairing.items():
            if h not in hs or p not in hs:
                raise MalformedPairing(f"half-edge {h}<->{p} is not a vertex slot")
            if h == p or self.pairing.get(p) != h:
                raise MalformedPairing(f"pairing is not an involution at {h}")
        missing = hs - set(self.pairing)
        if missing:
            raise MalformedPairing(f"unpaired half-edges: {sorted(missing)[:4]}")
        for c, ax in self.crossings.items():
            if ax not in (0, 1):
                raise DiagramError(f"crossing {c} has over_axis {ax}")
        v, e = len(self.vertices()), len(self.pairing) // 2
        f = len(self.face_orbits())
        ncomp = len(self.projection_components())
        # the combinatorial map of each component is a sphere
        if v - e + f != 2 * ncomp:
            raise NonSphere(f"Euler characteristic {v - e + f} for {ncomp} component(s)")

    def __eq__(self, other):
        return isinstance(other, Diagram) and self.crossings == other.crossings \
            and self.disks == other.disks and self.pairing == other.pairing

    def __repr__(self):
        return f"Diagram({len(self.crossings)} crossings, {len(self.disks)} disks)"

    # -- faces -------------------------------------------------------------
    def face_next(self, h: HalfEdge) -> HalfEdge:
        k, v, j = self.pairing[h]
        return (k, v, (j - 1) % 4)

    def face_orbits(self) -> list:
        if "orbits" not in self._cache:
            seen, orbits = set(), []
            for h in self.half_edges():
                if h in seen:
                    continue
                orbit = []
                while h not in seen:
                    seen.add(h)
                    orbit.append(h)
                    h = self.face_next(h)
                orbits.append(tuple(orbit))
            self._cache["orbits"] = orbits
        return self._cache["orbits"]

    def face_index(self) -> dict:
        """Map half-edge -> index of its face orbit."""
        if "face_index" not in self._cache:
            self._cache["face_index"] = {
                h: i for i, orb in enumerate(self.face_orbits()) for h in orb}
        return self._cache["face_index"]

    def projection_components(self) -> list:
        if "pcomp" not in self._cache:
            adj = defaultdict(set)
            for h, p in self.pairing.items():
                adj[vertex_of(h)].add(vertex_of(p))
            seen, comps = set(), []
            for v in self.vertices():
                if v in seen:
                    continue
                stack, comp = [v], []
                seen.add(v)
                while stack:
                    u = stack.pop()
                    comp.append(u)
                    for w in adj[u]:
                        if w not in seen:
                            seen.add(w)
                            stack.append(w)
                comps.append(sorted(comp))
            self._cache["pcomp"] = comps
        return self._cache["pcomp"]

    # -- strands -----------------------------------------------------------
    def strand_next(self, h: HalfEdge) -> Optional[HalfEdge]:
        """Continue a strand that arrives at ``h``; None when it ends at a disk."""
        if h[0] == "B":
            return None
        return (h[0], h[1], (h[2] + 2) % 4)

    def strand_walk(self, start: HalfEdge) -> list:
        """Half-edges visited (as departures) walking from ``start`` until a disk or return."""
        out, h = [], start
        while True:
            out.append(h)
            arrive = self.pairing[h]
            nxt = self.strand_next(arrive)
            if nxt is None or nxt == start:
                return out
            h = nxt

    def replace(self, crossings=None, disks=None, pairing=None, check=True) -> "Diagram":
        return Diagram(self.crossings if crossings is None else crossings,
                       self.disks if disks is None else disks,
                       self.pairing if pairing is None else pairing, check=check)


@dataclass(frozen=True)
class Face:
    boundary: tuple
    incident_disks: frozenset = field(default_factory=frozenset)


@dataclass(frozen=True)
class Fragment:
    """A diagram piece with ``nports`` boundary points in counterclockwise order.

    Port ``k`` is the placeholder half-edge ``('P', k, 0)``.  Crossing ids are
    local and get relabelled when the fragment is spliced into a diagram.
    """
    crossings: tuple  # ((id, over_axis), ...)
    pairing: tuple  # ((h, h), ...) each pair once
    nports: int = 4

    def crossing_map(self) -> dict:
        return dict(self.crossings)

    def pair_map(self) -> dict:
        m = {}
        for a, b in self.pairing:
            m[a] = b
            m[b] = a
        return m

    def port(self, k: int) -> HalfEdge:
        return ("P", k, 0)


def build_diagram(spec: Mapping) -> Diagram:
    """Build a diagram from ``{"crossings": {id: axis}, "disks": {id: content},
    "pairing": [(h, h), ...]}`` with half-edges as ``(kind, id, slot)``."""
    pairing = {}
    for a, b in spec.get("pairing", ()):
        a, b = tuple(a), tuple(b)
        if a in pairing or b in pairing or a == b:
            raise MalformedPairing(f"half-edge used more than once: {a if a in pairing else b}")
        pairing[a] = b
        pairing[b] = a
    return Diagram(spec.get("crossings", {}), spec.get("disks", {}), pairing)


def faces(d: Diagram) -> list:
    out = []
    for orb in d.face_orbits():
        out.append(Face(orb, frozenset(h[1] for h in orb if h[0] == "B")))
    return out


def splice(d: Diagram, removed: Iterable[Vertex], boundary: list, frag: Fragment,
           check: bool = True):
    """Replace a region of ``d`` by ``frag``.

    ``boundary[k]`` is the half-edge outside the region that attaches to port
    ``k`` (ports listed counterclockwise around the region), or ``('P', j, 0)``
    when port ``k`` is joined to port ``j`` by an arc outside the fragment.
    Real boundary half-edges are unpaired from whatever they touched inside.
    Returns ``(new_diagram, relabel)`` where ``relabel`` maps fragment crossing
    ids to their ids in the result.
    """
    removed = set(removed)
    gone = {h for v in removed for h in slots(v)}
    reals = {b for b in boundary if b[0] != "P"}
    for b in reals:
        inner = d.pairing[b]
        if inner not in gone and inner not in reals:
            raise DiagramError(f"boundary half-edge {b} does not face the region")
    pairing = {h: p for h, p in d.pairing.items() if h not in gone and h not in reals}
    crossings = {c: ax for c, ax in d.crossings.items() if ("X", c) not in removed}
    disks = {b: t for b, t in d.disks.items() if ("B", b) not in removed}

    base = max(list(crossings) + [c for c in d.crossings], default=0) + 1
    relabel = {}
    for i, (cid, ax) in enumerate(frag.crossings):
        relabel[cid] = base + i
        crossings[base + i] = ax

    def real(h):
        return h if h[0] == "P" else ("X", relabel[h[1]], h[2])

    # graph over fragment half-edges and port placeholders
    link = defaultdict(list)
    for a, b in frag.pairing:
        a, b = real(a), real(b)
        link[a].append(b)
        link[b].append(a)
    for k, b in enumerate(boundary):
        if b[0] == "P" and b[1] < k:
            continue
        link[("P", k, 0)].append(b)
        link[b].append(("P", k, 0))
    placeholder_seen = set()
    for h in list(link):
        if h[0] == "P":
            continue
        if h in pairing:
            continue
        # follow through placeholders to the next real half-edge
        prev, cur = h, link[h][0]
        while cur[0] == "P":
            placeholder_seen.add(cur)
            nxt = [x for x in link[cur] if x != prev]
            if len(link[cur]) != 2:
                raise DiagramError(f"port {cur} is not attached exactly twice")
            prev, cur = cur, (nxt[0] if nxt else link[cur][0])
        pairing[h] = cur
        pairing[cur] = h
    for p in link:
        if p[0] == "P" and p not in placeholder_seen:
            raise FreeLoop("splice closes a crossing-free loop")
    return Diagram(crossings, disks, pairing, check=check), relabel


# -- filled disks ------------------------------------------------------------

def expand(d: Diagram):
    """Inline every filled disk's tangle.

    Returns ``(flat, origin)`` where ``origin`` maps each crossing id of
    ``flat`` that came from a disk to that disk's id.  Empty disks stay.
    """
    from .tangles import tangle_fragment

    key = "expanded"
    if key in d._cache:
        return d._cache[key]
    flat, origin = d, {}
    for b in sorted(d.disks):
        content = d.disks[b]
        if content is None:
            continue
        v = ("B", b)
        boundary = []
        for h in slots(v):
            o = flat.pairing[h]
            boundary.append(("P", o[2], 0) if vertex_of(o) == v else o)
        frag = tangle_fragment(content)
        flat, relabel = splice(flat, [v], boundary, frag, check=False)
        for new in relabel.values():
            origin[new] = b
    flat.validate()
    d._cache[key] = (flat, origin)
    return flat, origin


def _filled_view(d: Diagram) -> Diagram:
    if any(t is not None for t in d.disks.values()):
        return expand(d)[0]
    return d


# -- predicates --------------------------------------------------------------

def is_split_diagram(d: Diagram) -> bool:
    return len(d.projection_components()) > 1


def strands(d: Diagram) -> list:
    """Every strand as a list of departing half-edges; open strands start at a disk leg."""
    seen, out = set(), []
    starts = [h for h in d.half_edges() if h[0] == "B"]
    starts += [h for h in d.half_edges() if h[0] == "X"]
    for h in starts:
        if h in seen:
            continue
        if h[0] == "X":
            # a closed strand can be entered at either end of any edge; only
            # walk in the direction not yet covered
            if d.pairing[h] in seen:
                continue
        walk = d.strand_walk(h)
        for x in walk:
            seen.add(x)
            seen.add(d.pairing[x])
        out.append(walk)
    return out


def is_alternating(d: Diagram) -> bool:
    """Walk every strand and require over/under passages to alternate."""
    d = _filled_view(d)
    for walk in strands(d):
        passes = []
        for h in walk:
            if h[0] == "X":
                passes.append(d.over_at(h))
        last = d.pairing[walk[-1]]
        closed = last[0] == "X" and d.strand_next(last) == walk[0]
        for a, b in zip(passes, passes[1:]):
            if a == b:
                return False
        if closed and len(passes) > 1 and passes[0] == passes[-1]:
            return False
    return True


def is_alternating_local(d: Diagram) -> bool:
    """Edge-local criterion: every crossing-to-crossing edge has one over end."""
    d = _filled_view(d)
    for h, p in d.edges():
        if h[0] == "X" and p[0] == "X" and d.over_at(h) == d.over_at(p):
            return False
    return True


def segment_pair_counts(d: Diagram) -> dict:
    """Number of segments (edges) between each unordered pair of faces."""
    fi = d.face_index()
    counts = defaultdict(int)
    for h, p in d.edges():
        counts[frozenset((fi[h], fi[p]))] += 1
    return dict(counts)


def prime_measure(d: Diagram) -> int:
    return sum(n * (n - 1) // 2 for n in segment_pair_counts(d).values())


def strongly_prime_outside_disks(d: Diagram) -> bool:
    # disks are vertices here, so every face-to-face curve already avoids them
    return prime_measure(d) == 0


def disk_corners(d: Diagram) -> dict:
    """Map face index -> list of (disk id, corner k) touching it.

    Corner ``k`` of a disk lies between legs ``k`` and ``k + 1``.
    """
    fi = d.face_index()
    out = defaultdict(list)
    for b in sorted(d.disks):
        for k in range(4):
            out[fi[("B", b, k)]].append((b, k))
    return out


def _arc_is_4a(d: Diagram, disk: int, k: int, crossed: list, end: tuple) -> bool:
    if end[0] != disk:
        return False
    cur = k
    for h in crossed:
        # h is the half-edge on the departing face side; the edge must be a leg
        legs = [x for x in (h, d.pairing[h]) if x[0] == "B" and x[1] == disk]
        if not legs:
            return False
        s = legs[0][2]
        if s == (cur + 1) % 4:
            cur = s
        elif s == cur:
            cur = (s - 1) % 4
        else:
            return False
    return cur == end[1]


def disk_arc_violations(d: Diagram, only=None) -> list:
    """Arcs between disk corners meeting the diagram at most twice that do not
    cobound a crossing-free disk with one disk boundary.

    ``only`` restricts the search to arcs starting at that disk.
    """
    fi = d.face_index()
    orbits = d.face_orbits()
    corners = disk_corners(d)
    bad = []
    for f0, cs in corners.items():
        for (b, k) in cs:
            if only is not None and b != only:
                continue
            frontier = [(f0, [])]
            for depth in range(3):
                nxt = []
                for f, path in frontier:
                    for end in corners.get(f, ()):
                        if not _arc_is_4a(d, b, k, path, end):
                            bad.append(((b, k), end, tuple(path)))
                    if depth < 2:
                        for h in orbits[f]:
                            # stepping straight back over the edge just crossed
                            if path and h == d.pairing[path[-1]]:
                                continue
                            nxt.append((fi[d.pairing[h]], path + [h]))
                frontier = nxt
    return bad


def disk_arc_condition(d: Diagram) -> bool:
    return not disk_arc_violations(d)


def component_count(d: Diagram) -> int:
    """Number of link components once every disk holds its tangle."""
    if any(t is None for t in d.disks.values()):
        raise UnfilledDisk("component count needs every disk filled")
    from .tangles import leg_connections

    parent = {k: k for k in set(d.edge_key(h) for h in d.pairing)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(h1, h2):
        a, b = find(d.edge_key(h1)), find(d.edge_key(h2))
        if a != b:
            parent[a] = b

    for x in d.crossings:
        union(("X", x, 0), ("X", x, 2))
        union(("X", x, 1), ("X", x, 3))
    for b, content in d.disks.items():
        for i, j in leg_connections(content):
            union(("B", b, i), ("B", b, j))
    return len({find(k) for k in parent})


def strand_components(d: Diagram) -> dict:
    """Map edge key -> component index for a diagram without disks."""
    comp = {}
    for i, walk in enumerate(strands(d)):
        for h in walk:
            comp[d.edge_key(h)] = i
    return comp


def bigon_classes(d: Diagram, only: Optional[set] = None) -> list:
    """Equivalence classes of crossings generated by sharing a bigon face."""
    parent = {c: c for c in d.crossings if only is None or c in only}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for orb in d.face_orbits():
        if len(orb) == 2 and orb[0][0] == "X" and orb[1][0] == "X":
            a, b = orb[0][1], orb[1][1]
            if a != b and a in parent and b in parent:
                parent[find(a)] = find(b)
    classes = defaultdict(list)
    for c in parent:
        classes[find(c)].append(c)
    return sorted(sorted(v) for v in classes.values())


def twist_number(d: Diagram) -> int:
    """Class count of crossings under the bigon relation (filled disks inlined)."""
    return len(bigon_classes(_filled_view(d)))
