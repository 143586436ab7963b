"""Slopes, continued fractions and rational tangles.

Tangle boundary points are NE, NW, SW, SE (counterclockwise), numbered 0..3.
A horizontal twist acts on the NE/SE side, a vertical twist on the SW/SE side;
the tangle of ``[a1, ..., ak]`` is built innermost term first, with ``a1`` a
horizontal twist, and has fraction ``a1 + 1/(a2 + 1/(... + 1/ak))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional

import sympy

from .diagram import Diagram, DiagramError, Fragment, LEG_NAMES, splice, slots

NE, NW, SW, SE = 0, 1, 2, 3


class SlopeError(ValueError):
    pass


class ClassMismatch(DiagramError):
    pass


class NoPreimageSlope(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Slope:
    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise SlopeError("0/0 is not a slope")
        if gcd(abs(p), abs(q)) != 1:
            raise SlopeError(f"slope not in lowest terms: {p}/{q}")
        if q < 0 or (q == 0 and p < 0):
            object.__setattr__(self, "p", -p)
            object.__setattr__(self, "q", -q)

    @classmethod
    def parse(cls, text: str) -> "Slope":
        t = text.strip().lower()
        if t in ("inf", "infinity", "1/0"):
            return cls(1, 0)
        try:
            if "/" in t:
                a, b = t.split("/")
                return cls(int(a), int(b))
            return cls(int(t), 1)
        except ValueError as exc:
            if isinstance(exc, SlopeError):
                raise
            raise SlopeError(f"cannot parse slope {text!r}") from None

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    def value(self) -> Optional[Fraction]:
        return None if self.q == 0 else Fraction(self.p, self.q)

    def __str__(self):
        return f"{self.p}/{self.q}"


INFINITY = Slope(1, 0)
ZERO = Slope(0, 1)


def evaluate(terms) -> Slope:
    """Value of ``a1 + 1/(a2 + ...)`` as a slope; a zero tail evaluates to 1/0."""
    num, den = 1, 0  # the empty expansion is infinity
    for a in reversed(list(terms)):
        num, den = a * num + den, num
    g = gcd(num, den) or 1
    return Slope(num // g, den // g)


# -- depth ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def _geodesic(p: int, q: int) -> tuple:
    """Shortest integer expansion of p/q (q > 0) counting every term."""
    if q == 0:
        return ()
    if q == 1:
        return (p,)
    fl = p // q
    best = None
    for a in (fl, fl + 1):
        # 1/(p/q - a) = q / (p - a q)
        num, den = q, p - a * q
        if den < 0:
            num, den = -num, -den
        tail = _geodesic(num, den)
        if best is None or len(tail) + 1 < len(best):
            best = (a,) + tail
    return best


@dataclass(frozen=True)
class ContinuedFraction:
    terms: tuple

    def value(self) -> Slope:
        return evaluate(self.terms)

    def nonzero_length(self) -> int:
        return sum(1 for a in self.terms if a != 0)


def shortest_expansion(s: Slope) -> ContinuedFraction:
    """An integer expansion of ``s`` with the fewest nonzero terms.

    Only ``a1`` may be zero.  1/0 has the empty expansion and 0/1 is ``[0]``.
    """
    if s.is_infinite:
        return ContinuedFraction(())
    if s.p == 0:
        return ContinuedFraction((0,))
    direct = _geodesic(s.p, s.q)
    recip = Slope(s.q, s.p)
    via_zero = (0,) + _geodesic(recip.p, recip.q)
    if len(via_zero) - 1 < len(direct):
        return ContinuedFraction(via_zero)
    return ContinuedFraction(direct)


def depth(s: Slope) -> int:
    return shortest_expansion(s).nonzero_length()


def depth_multislope(slopes) -> int:
    return sum(depth(s) for s in slopes)


def regular_expansion(s: Slope) -> tuple:
    """Expansion with all terms of one sign (``a1`` may be 0); last term is not +-1
    unless it is the only nonzero term."""
    if s.is_infinite:
        return ()
    sign = -1 if s.p < 0 else 1
    p, q = abs(s.p), s.q
    terms = []
    while q:
        a, r = divmod(p, q)
        terms.append(a)
        p, q = q, r
    return tuple(sign * a for a in terms)


# -- tangle construction ---------------------------------------------------------

class _Builder:
    def __init__(self, pairs):
        self.cross = {}
        self.pair = {}
        for a, b in pairs:
            self._link(a, b)

    def _link(self, a, b):
        self.pair[a] = b
        self.pair[b] = a

    def _port(self, k):
        return ("P", k, 0)

    def _add(self, axis):
        cid = len(self.cross) + 1
        self.cross[cid] = axis
        return cid

    def twist(self, n: int, horizontal: bool):
        for _ in range(abs(n)):
            axis = 0 if n > 0 else 1
            x = self._add(axis)
            if horizontal:
                outer = (NE, SE)
                inner_slots, outer_slots = (NW, SW), (NE, SE)
            else:
                outer = (SW, SE)
                inner_slots, outer_slots = (NW, NE), (SW, SE)
            a = self.pair.pop(self._port(outer[0]))
            c = self.pair.pop(self._port(outer[1]))
            self.pair.pop(a, None)
            self.pair.pop(c, None)
            if a == self._port(outer[1]):
                # the two ports were joined directly: close a kink
                self._link(("X", x, inner_slots[0]), ("X", x, inner_slots[1]))
            else:
                self._link(("X", x, inner_slots[0]), a)
                self._link(("X", x, inner_slots[1]), c)
            self._link(("X", x, outer_slots[0]), self._port(outer[0]))
            self._link(("X", x, outer_slots[1]), self._port(outer[1]))

    def fragment(self) -> Fragment:
        pairs = tuple(sorted((a, b) for a, b in self.pair.items() if a < b))
        return Fragment(tuple(sorted(self.cross.items())), pairs, 4)


ZERO_ARCS = ((("P", NE, 0), ("P", NW, 0)), (("P", SW, 0), ("P", SE, 0)))
INF_ARCS = ((("P", NE, 0), ("P", SE, 0)), (("P", NW, 0), ("P", SW, 0)))


def fragment_from_terms(terms) -> Fragment:
    """Tangle diagram of ``[a1, ..., ak]`` (``a1`` horizontal, alternating after)."""
    terms = list(terms)
    m = len(terms)
    if m == 0:
        return _Builder(INF_ARCS).fragment()
    # term j (1-based) is horizontal iff j is odd; the innermost term is built
    # on the 0 tangle when horizontal and on the infinity tangle otherwise
    b = _Builder(ZERO_ARCS if m % 2 == 1 else INF_ARCS)
    for j in range(m, 0, -1):
        b.twist(terms[j - 1], horizontal=(j % 2 == 1))
    return b.fragment()


@lru_cache(maxsize=None)
def tangle_fragment(s: Slope) -> Fragment:
    """The alternating diagram of the rational tangle of slope ``s``."""
    return fragment_from_terms(regular_expansion(s))


@dataclass(frozen=True)
class Tangle:
    fragment: Fragment
    slope: Optional[Slope] = None

    @property
    def crossing_count(self) -> int:
        return len(self.fragment.crossings)


def build_rational_tangle(s: Slope) -> Tangle:
    return Tangle(tangle_fragment(s), s)


def closure_diagram(frag: Fragment) -> Diagram:
    """Close a 4-ended fragment by one vertex standing for the outside ball.

    Seen from that vertex the ports run clockwise, so port ``k`` sits in slot
    ``(-k) % 4``.  The vertex is disk 0.
    """
    boundary = [("B", 0, (-k) % 4) for k in range(4)]
    pairing = {}
    cross = dict(frag.crossings)
    for a, c in frag.pairing:
        a2 = boundary[a[1]] if a[0] == "P" else a
        c2 = boundary[c[1]] if c[0] == "P" else c
        pairing[a2] = c2
        pairing[c2] = a2
    return Diagram(cross, {0: None}, pairing)


def twist_region_count(t) -> int:
    """Bigon classes of a tangle's crossings (faces inside the tangle only)."""
    from .diagram import bigon_classes
    frag = t.fragment if isinstance(t, Tangle) else t
    return len(bigon_classes(closure_diagram(frag)))


def _fragment_walk(frag: Fragment, start_port: int):
    """Follow the strand entering at ``start_port``; return (exit port, passages)."""
    pair = frag.pair_map()
    cross = frag.crossing_map()
    h = pair[("P", start_port, 0)]
    passes = []
    while h[0] != "P":
        passes.append(h[2] % 2 == cross[h[1]])
        h = pair[("X", h[1], (h[2] + 2) % 4)]
    return h[1], passes


@lru_cache(maxsize=None)
def leg_connections(s: Slope) -> tuple:
    """The two pairs of legs joined by the strands of the tangle of ``s``."""
    frag = tangle_fragment(s)
    pairs = set()
    for leg in range(4):
        out, _ = _fragment_walk(frag, leg)
        pairs.add(tuple(sorted((leg, out))))
    return tuple(sorted(pairs))


def tangle_fraction(frag: Fragment) -> Slope:
    """Fraction of a 4-ended tangle via its Fox colorings over the rationals.

    Colorings (one value per edge, ``over`` twice minus ``under-in`` equals
    ``under-out`` at each crossing) of a rational tangle form a 2-dimensional
    space; for any non-constant one the fraction is
    ``(NE - NW) / (SE - NE)``.
    """
    pair = frag.pair_map()
    keys = sorted({min(a, b) for a, b in pair.items()})
    index = {k: i for i, k in enumerate(keys)}

    def var(h):
        return index[min(h, pair[h])]

    rows = []
    for cid, ax in frag.crossings:
        o1, o2 = ("X", cid, ax), ("X", cid, ax + 2)
        u1, u2 = ("X", cid, 1 - ax), ("X", cid, 3 - ax)
        r = [0] * len(keys)
        r[var(o1)] += 2
        r[var(u1)] -= 1
        r[var(u2)] -= 1
        rows.append(r)
        r = [0] * len(keys)
        r[var(o1)] += 1
        r[var(o2)] -= 1
        rows.append(r)
    m = sympy.Matrix(rows) if rows else sympy.zeros(0, len(keys))
    basis = m.nullspace() if rows else [sympy.eye(len(keys))[:, i] for i in range(len(keys))]
    ports = [var(("P", k, 0)) for k in range(4)]
    for v in basis:
        ne, nw, se = v[ports[NE]], v[ports[NW]], v[ports[SE]]
        num, den = ne - nw, se - ne
        if num == 0 and den == 0:
            continue
        num, den = sympy.Rational(num), sympy.Rational(den)
        if den == 0:
            return INFINITY
        f = num / den
        return Slope(int(f.p), int(f.q))
    raise DiagramError("tangle has only constant colorings")


# -- equivalence classes ---------------------------------------------------------

@dataclass(frozen=True, order=True)
class TangleClass:
    ne_entry_over: bool
    ne_exit: str  # "SE", "SW" or "NW"


# 1/0 and 0/1 have no crossings; their classes are fixed once here.
INFINITY_CLASS = TangleClass(True, "SE")
ZERO_CLASS = TangleClass(True, "NW")

REPRESENTATIVE_SLOPES = (Slope(1, 1), Slope(-1, 1), Slope(2, 1), Slope(-2, 1),
                         Slope(1, 2), Slope(-1, 2))


def tangle_class(frag: Fragment) -> Optional[TangleClass]:
    exit_port, passes = _fragment_walk(frag, NE)
    if not passes:
        return None
    return TangleClass(passes[0], LEG_NAMES[exit_port])


def equivalence_class(s: Slope, chirality_context: bool = True) -> TangleClass:
    """Class of the tangle of slope ``s``.  ``chirality_context`` is accepted for
    interface compatibility; the sign convention is fixed by the construction."""
    if s == INFINITY:
        return INFINITY_CLASS
    if s == ZERO:
        return ZERO_CLASS
    return tangle_class(tangle_fragment(s))


def class_representative(tc: TangleClass) -> Tangle:
    for s in REPRESENTATIVE_SLOPES:
        if equivalence_class(s) == tc:
            return build_rational_tangle(s)
    raise ClassMismatch(f"no representative for {tc}")


def representative_slope(s: Slope) -> Slope:
    return class_representative(equivalence_class(s)).slope


def substitute_tangle(d: Diagram, disk_id: int, t, color=None, coloring=None):
    """Replace the content of a disk by a tangle of the same class.

    ``t`` is a :class:`Tangle` or a :class:`Slope`.  Leg colors are untouched
    (the content of a single-colored disk is single colored).  Returns the new
    diagram, or ``(diagram, coloring)`` when a coloring is given.
    """
    s = t.slope if isinstance(t, Tangle) else t
    current = d.disks[disk_id]
    if current is not None:
        want = equivalence_class(current)
        if equivalence_class(s) != want:
            raise ClassMismatch(
                f"slope {s} is in class {equivalence_class(s)}, disk {disk_id} needs {want}")
    disks = dict(d.disks)
    disks[disk_id] = s
    out = d.replace(disks=disks)
    if coloring is None:
        return out
    if color is not None:
        legs = {coloring.color_of(d, h) for h in slots(("B", disk_id))}
        if legs != {color}:
            raise ClassMismatch(f"disk {disk_id} legs are not single colored {color}")
    return out, coloring


# -- slopes under torus covers ---------------------------------------------------

@dataclass(frozen=True)
class CoverMatrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det == 0:
            raise ValueError("cover matrix must have nonzero determinant")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def apply(self, p: int, q: int):
        return self.a * p + self.b * q, self.c * p + self.d * q


def pushforward_slope(A: CoverMatrix, s: Slope):
    x, y = A.apply(s.p, s.q)
    m = gcd(abs(x), abs(y))
    return Slope(x // m, y // m), m


def pullback_slope(A: CoverMatrix, s: Slope) -> Slope:
    # solve A v = t (p, q) over the rationals and take the primitive direction
    det = A.det
    x = A.d * s.p - A.b * s.q
    y = -A.c * s.p + A.a * s.q
    if det < 0:
        x, y = -x, -y
    g = gcd(abs(x), abs(y))
    if g == 0:
        raise NoPreimageSlope(f"{s} has no preimage")
    pre = Slope(x // g, y // g)
    if pushforward_slope(A, pre)[0] != s:
        raise NoPreimageSlope(f"{s} has no preimage")
    return pre


NUMERATOR = ((NE, NW), (SW, SE))
DENOMINATOR = ((NE, SE), (NW, SW))


def close_fragment(frag: Fragment, joins=NUMERATOR) -> Diagram:
    """Join the ports of a 4-ended fragment in pairs by arcs outside it.

    The numerator closure of the tangle of slope p/q is the two-bridge link
    with determinant |p| (``[3]`` gives the trefoil, ``5/2`` the figure-eight).
    """
    pair = frag.pair_map()
    outside = {}
    for a, b in joins:
        outside[("P", a, 0)] = ("P", b, 0)
        outside[("P", b, 0)] = ("P", a, 0)
    pairing = {}
    for h, p in pair.items():
        if h[0] == "P":
            continue
        seen = 0
        while p[0] == "P":
            p = pair[outside[p]]
            seen += 1
            if seen > 4:
                raise DiagramError("closure leaves a crossing-free loop")
        pairing[h] = p
    if not frag.crossings:
        raise DiagramError("closure of a crossing-free tangle has only free loops")
    return Diagram(dict(frag.crossings), {}, pairing)


def two_bridge(s: Slope) -> Diagram:
    return close_fragment(tangle_fragment(s), NUMERATOR)
