"""From a colored tangle diagram with disks to a certified alternating knot.

The run fills each disk with a small representative of the class of its
requested slope, rewrites the outside until the hyperbolicity conditions hold,
substitutes the requested rational tangles and reports the volume bound.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import diagram as dg
from . import moves as mv
from .covers import Coloring, is_three_colored, is_transitive, validate_coloring
from .diagram import Diagram, DiagramError, slots
from .tangles import (Slope, _fragment_walk, class_representative, depth, equivalence_class,
                      fragment_from_terms, shortest_expansion, tangle_fragment)

log = logging.getLogger(__name__)

DEFAULT_LACKENBY_C = Fraction("10.1494")


class SignNormalizationFailed(DiagramError):
    pass


class MonochromaticInput(DiagramError):
    pass


class ConditionsNotReached(DiagramError):
    pass


# -- the strand graph ----------------------------------------------------------------

@dataclass(frozen=True)
class GraphEdge:
    ends: tuple  # ((disk, leg), (disk, leg))
    sign: int
    passages: int

    @property
    def is_loop(self) -> bool:
        return self.ends[0][0] == self.ends[1][0]


@dataclass(frozen=True)
class SignedGraph:
    vertices: tuple
    edges: tuple

    def signs(self) -> list:
        return [e.sign for e in self.edges]


def leg_end_over(s: Slope, leg: int) -> bool:
    """Over/under at the first crossing met entering the tangle of ``s`` at ``leg``."""
    _, passes = _fragment_walk(tangle_fragment(s), leg)
    if not passes:
        raise dg.UnfilledDisk(f"tangle {s} has no crossing on leg {leg}")
    return passes[0]


def build_strand_graph(d: Diagram) -> SignedGraph:
    """One edge per strand of the outside diagram running between disk legs."""
    if any(t is None for t in d.disks.values()):
        raise dg.UnfilledDisk("the strand graph needs every disk filled")
    seen = set()
    edges = []
    for b in sorted(d.disks):
        for k in range(4):
            h = ("B", b, k)
            if h in seen:
                continue
            walk = d.strand_walk(h)
            end = d.pairing[walk[-1]]
            seen.add(h)
            seen.add(end)
            n = len(walk) - 1
            t1 = leg_end_over(d.disks[b], k)
            t2 = leg_end_over(d.disks[end[1]], end[2])
            good = (t1 == t2 and n % 2 == 1) or (t1 != t2 and n % 2 == 0)
            edges.append(GraphEdge(((b, k), (end[1], end[2])), 1 if good else -1, n))
    return SignedGraph(tuple(sorted(d.disks)), tuple(edges))


def maximal_forest(g: SignedGraph) -> list:
    """Indices of a maximal spanning forest of ``g`` (loops never chosen)."""
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    for i, e in enumerate(g.edges):
        a, b = find(e.ends[0][0]), find(e.ends[1][0])
        if a != b:
            parent[a] = b
            chosen.append(i)
    return chosen


def vertex_signs(forest: list, g: SignedGraph) -> dict:
    """Signs on disks with ``sign(edge) = +`` iff its ends agree, on forest edges.

    Each tree is rooted at its smallest disk, which gets ``+``.
    """
    adj = {v: [] for v in g.vertices}
    for i in forest:
        e = g.edges[i]
        u, v = e.ends[0][0], e.ends[1][0]
        adj[u].append((v, e.sign))
        adj[v].append((u, e.sign))
    signs = {}
    for root in g.vertices:
        if root in signs:
            continue
        signs[root] = 1
        stack = [root]
        while stack:
            u = stack.pop()
            for v, s in adj[u]:
                if v not in signs:
                    signs[v] = signs[u] * s
                    stack.append(v)
    return signs


def normalize_edge_signs(d: Diagram, c: Optional[Coloring]):
    """Flip the disks of sign ``-`` so every strand-graph edge gets sign ``+``."""
    g = build_strand_graph(d)
    vs = vertex_signs(maximal_forest(g), g)
    flips = [b for b in sorted(vs) if vs[b] < 0]
    receipts = []
    for chirality in (1, -1):
        cur, cc, recs = d, c, []
        for b in flips:
            cur, cc, rec = mv.disk_flip(cur, cc, b, chirality)
            recs.append(rec)
        if all(s > 0 for s in build_strand_graph(cur).signs()):
            return cur, cc, recs
        log.warning("collar chirality %d left a negative edge; retrying", chirality)
    raise SignNormalizationFailed("some strand-graph edge stays negative")


def disk_types(d: Diagram) -> dict:
    """Checkerboard type of each filled disk's crossings (connected diagrams)."""
    flat, origin = dg.expand(d)
    types = mv.crossing_types(flat)
    out = {}
    for x, b in origin.items():
        out.setdefault(b, set()).add(types[x])
    return {b: t.pop() if len(t) == 1 else None for b, t in out.items()}


def align_disk_types(d: Diagram, c: Optional[Coloring]):
    """Give all disks one checkerboard type.

    Disks joined by strand-graph edges already agree once the edges are
    positive; disks with no such connection are brought in line by sweeping
    every disk of a disagreeing group, which keeps that group's edges
    positive.
    """
    if len(d.projection_components()) != 1:
        raise DiagramError("disk types are only comparable on a connected diagram")
    types = disk_types(d)
    if None in types.values():
        raise SignNormalizationFailed("a disk mixes checkerboard types")
    if len(set(types.values())) <= 1:
        return d, c, []
    majority = max((list(types.values()).count(t), t) for t in (0, 1))[1]
    receipts = []
    for b in sorted(types):
        if types[b] != majority:
            d, c, rec = mv.disk_flip(d, c, b)
            receipts.append(rec)
    types = disk_types(d)
    if len(set(types.values())) > 1:
        raise SignNormalizationFailed("disk types still disagree after sweeping")
    return d, c, receipts


# -- conditions ------------------------------------------------------------------------

def condition_report(d: Diagram, c: Optional[Coloring]) -> dict:
    """The seven hyperbolicity conditions on a diagram with filled disks."""
    out = {
        "non_split": len(d.projection_components()) == 1,
        "prime_outside_disks": dg.strongly_prime_outside_disks(d),
        "disk_arcs": dg.disk_arc_condition(d),
        "three_colored": c is not None and all(is_three_colored(d, c, x) for x in d.crossings),
        "alternating": dg.is_alternating(d),
        "knot": dg.component_count(d) == 1,
    }
    out["colored"] = c is not None and validate_coloring(d, c)
    return out


def _keep_2_4(d: Diagram) -> bool:
    return (len(d.projection_components()) == 1 and dg.prime_measure(d) == 0
            and dg.disk_arc_condition(d))


def _keep_2_3(d: Diagram) -> bool:
    return len(d.projection_components()) == 1


def fill_representatives(d: Diagram, slopes) -> Diagram:
    disks = dict(d.disks)
    for b, s in zip(sorted(d.disks), slopes):
        disks[b] = class_representative(equivalence_class(s)).slope
    return d.replace(disks=disks)


def enforce_conditions(d: Diagram, c: Coloring, max_rounds: int = 6):
    """Rewrite ``d`` (disks filled with representatives) until all conditions hold."""
    if not is_transitive(c):
        raise MonochromaticInput("the coloring uses a single color")
    receipts = []
    d, c, recs = normalize_edge_signs(d, c)
    receipts += recs
    for _ in range(max_rounds):
        # Condition 2: one projection component
        while len(d.projection_components()) > 1:
            d, c, rec = mv.alpha_isotopy(d, c, mv.connecting_arc(d))
            receipts.append(rec)
        d, c, recs = align_disk_types(d, c)
        receipts += recs
        # Conditions 3 and 4
        for b in sorted(d.disks):
            d, c, rec = mv.isolate_disk(d, c, b)
            if not rec.detail.get("skipped"):
                receipts.append(rec)
        while dg.prime_measure(d) > 0:
            d, c, rec = _reduce_once(d, c)
            receipts.append(rec)
        # Condition 5
        while True:
            bad = [x for x in sorted(d.crossings) if not is_three_colored(d, c, x)]
            if not bad:
                break
            d, c, rec = _three_color_once(d, c, bad)
            receipts.append(rec)
        # Condition 6
        d, c, recs = mv.make_alternating(d, c)
        receipts += recs
        # Condition 7
        d, c, recs = mv.knotify(d, c, keep=_keep_2_4)
        receipts += recs
        report = condition_report(d, c)
        if all(report.values()):
            return d, c, receipts
        log.info("conditions after a round: %s", report)
    raise ConditionsNotReached(f"conditions still failing: {condition_report(d, c)}")


def _reduce_once(d, c):
    last = None
    for site in mv.segment_pair_sites(d):
        try:
            return mv.reduce_segment_pair(d, c, site, keep=_keep_after_reduce)
        except DiagramError as exc:
            last = exc
    raise ConditionsNotReached(f"cannot lower the prime measure: {last}")


def _keep_after_reduce(d: Diagram) -> bool:
    return len(d.projection_components()) == 1 and dg.disk_arc_condition(d)


def _three_color_once(d, c, bad):
    last = None
    for x in bad:
        try:
            return mv.three_color_crossing_move(d, c, x, keep=_keep_2_4)
        except DiagramError as exc:
            last = exc
    raise ConditionsNotReached(f"no one-colored crossing can be fixed: {last}")


# -- filling and the bound -------------------------------------------------------------

def _as_fraction(c) -> Fraction:
    if isinstance(c, float):
        return Fraction(repr(c))
    return Fraction(c)


def link_volume_upper_bound(t_base: int, depth_sum: int, c=DEFAULT_LACKENBY_C) -> Fraction:
    c = _as_fraction(c)
    if c <= 0:
        raise ValueError("the volume constant must be positive")
    if t_base < 0 or depth_sum < 0:
        raise ValueError("twist counts are nonnegative")
    return 3 * c * (t_base + depth_sum)


def _substitute(d: Diagram, slopes, shortest: bool) -> Diagram:
    """Inline the requested tangles; ``shortest`` uses shortest-expansion diagrams."""
    flat = d
    for b, s in zip(sorted(d.disks), slopes):
        frag = fragment_from_terms(shortest_expansion(s).terms) if shortest else tangle_fragment(s)
        v = ("B", b)
        boundary = []
        for h in slots(v):
            o = flat.pairing[h]
            boundary.append(("P", o[2], 0) if o[0] == "B" and o[1] == b else o)
        flat, _ = dg.splice(flat, [v], boundary, frag)
    return flat


@dataclass
class PipelineReport:
    n_disks: int
    slopes: list
    certificates: dict
    t_base: int
    depth_sum: int
    lackenby_c: Fraction
    bound: Fraction
    twist_number_alternating: int
    twist_number_isotoped: int
    crossings: int
    receipts: list = field(default_factory=list)

    @property
    def additive_constant(self) -> Fraction:
        return 3 * self.lackenby_c * self.t_base

    @property
    def per_depth_constant(self) -> Fraction:
        return 3 * self.lackenby_c

    @property
    def ok(self) -> bool:
        return all(self.certificates.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n_disks,
            "slopes": [str(s) for s in self.slopes],
            "certificates": self.certificates,
            "t_base": self.t_base,
            "depth_sum": self.depth_sum,
            "lackenby_c": str(self.lackenby_c),
            "bound": str(self.bound),
            "bound_float": float(self.bound),
            "additive_constant": str(self.additive_constant),
            "per_depth_constant": str(self.per_depth_constant),
            "twist_number_alternating": self.twist_number_alternating,
            "twist_number_isotoped": self.twist_number_isotoped,
            "crossings": self.crossings,
            "moves": [r.to_dict() for r in self.receipts],
        }


def realize_filling(d: Diagram, c: Coloring, slopes, lackenby_c=DEFAULT_LACKENBY_C,
                    receipts=()):
    """Substitute the rational tangles of ``slopes`` and certify the knot.

    Returns ``(K, coloring of K, report)``.  ``K`` uses alternating tangle
    diagrams; the twist count in the bound is read from the same knot with each
    tangle drawn from its shortest expansion.
    """
    slopes = list(slopes)
    if len(slopes) != len(d.disks):
        raise ValueError(f"{len(d.disks)} disks but {len(slopes)} slopes")
    for b, s in zip(sorted(d.disks), slopes):
        want = equivalence_class(d.disks[b])
        if equivalence_class(s) != want:
            from .tangles import ClassMismatch
            raise ClassMismatch(f"slope {s} is not in the class of disk {b}")
    t_base = dg.twist_number(d)
    k = _substitute(d, slopes, shortest=False)
    ck = mv.transfer_coloring(d, c, k)
    k_twist = _substitute(d, slopes, shortest=True)
    outer = set(d.crossings)
    certs = {
        "knot": dg.component_count(k) == 1,
        "alternating": dg.is_alternating(k),
        "non_split": not dg.is_split_diagram(k),
        "strongly_prime": dg.prime_measure(k) == 0,
        "transitive_coloring": validate_coloring(k, ck) and is_transitive(ck),
        "three_colored_outside_tangles": all(is_three_colored(k, ck, x) for x in outer),
    }
    depth_sum = sum(depth(s) for s in slopes)
    cval = _as_fraction(lackenby_c)
    report = PipelineReport(
        n_disks=len(d.disks), slopes=slopes, certificates=certs, t_base=t_base,
        depth_sum=depth_sum, lackenby_c=cval,
        bound=link_volume_upper_bound(t_base, depth_sum, cval),
        twist_number_alternating=dg.twist_number(k),
        twist_number_isotoped=dg.twist_number(k_twist),
        crossings=len(k.crossings), receipts=list(receipts))
    return k, ck, report


def run_pipeline(d: Diagram, c: Coloring, slopes, lackenby_c=DEFAULT_LACKENBY_C):
    """Fill, enforce the conditions, substitute; returns ``(report, K, coloring)``."""
    slopes = list(slopes)
    if len(slopes) != len(d.disks):
        raise ValueError(f"{len(d.disks)} disks but {len(slopes)} slopes")
    filled = fill_representatives(d, slopes)
    if not validate_coloring(filled, c):
        raise DiagramError("the coloring is not valid with single-colored disks")
    dd, cc, receipts = enforce_conditions(filled, c)
    k, ck, report = realize_filling(dd, cc, slopes, lackenby_c, receipts)
    return report, k, ck
