import random

import pytest
from hypothesis import given, settings, strategies as st

from linkvol.diagram import (Diagram, Fragment, FreeLoop, MalformedPairing, NonSphere, UnfilledDisk,
                             build_diagram, component_count, disk_arc_condition, expand,
                             faces, is_alternating, is_alternating_local, is_split_diagram,
                             prime_measure, segment_pair_counts,
                             splice, strongly_prime_outside_disks, twist_number)
from linkvol.generate import random_diagram
from linkvol.tangles import NUMERATOR, Slope, close_fragment, tangle_fragment


def knot(s):
    return close_fragment(tangle_fragment(Slope.parse(s)), NUMERATOR)


def disjoint_union(d1, d2):
    shift = max(d1.crossings, default=0)
    bshift = max(d1.disks, default=0)
    ren = lambda h: (h[0], h[1] + (shift if h[0] == "X" else bshift), h[2])
    cross = dict(d1.crossings)
    cross.update({x + shift: ax for x, ax in d2.crossings.items()})
    disks = dict(d1.disks)
    disks.update({b + bshift: t for b, t in d2.disks.items()})
    pairing = dict(d1.pairing)
    pairing.update({ren(h): ren(p) for h, p in d2.pairing.items()})
    return Diagram(cross, disks, pairing), ren


def connected_sum(d1, d2):
    """Cut one edge of each diagram and join the ends across."""
    u, ren = disjoint_union(d1, d2)
    a = min(d1.pairing)
    b = d1.pairing[a]
    c = ren(min(d2.pairing))
    e = u.pairing[c]
    pairing = dict(u.pairing)
    for x, y in ((a, c), (b, e)):
        pairing[x] = y
        pairing[y] = x
    return Diagram(u.crossings, u.disks, pairing)


def one_crossing_unknot():
    return build_diagram({"crossings": {1: 0},
                          "pairing": [(("X", 1, 0), ("X", 1, 1)), (("X", 1, 2), ("X", 1, 3))]})


# -- construction ---------------------------------------------------------------------

def test_one_crossing_unknot_counts():
    d = one_crossing_unknot()
    assert (len(d.crossings), len(d.edges()), len(faces(d))) == (1, 2, 3)


def test_trefoil_counts():
    d = knot("3")
    assert (len(d.crossings), len(d.edges()), len(faces(d))) == (3, 6, 5)


def test_half_edge_used_twice():
    with pytest.raises(MalformedPairing):
        build_diagram({"crossings": {1: 0},
                       "pairing": [(("X", 1, 0), ("X", 1, 1)), (("X", 1, 0), ("X", 1, 2)),
                                   (("X", 1, 2), ("X", 1, 3))]})


def test_unpaired_half_edge():
    with pytest.raises(MalformedPairing):
        build_diagram({"crossings": {1: 0}, "pairing": [(("X", 1, 0), ("X", 1, 1))]})


def _face_count(pairing):
    # faces: from h go to its partner, then one slot clockwise
    seen, count = set(), 0
    for h in pairing:
        if h in seen:
            continue
        count += 1
        while h not in seen:
            seen.add(h)
            k, v, j = pairing[h]
            h = (k, v, (j - 1) % 4)
    return count


@pytest.mark.parametrize("perm", list(__import__("itertools").permutations(range(4))))
def test_sphere_check_on_two_crossings(perm):
    pairs = [(("X", 1, i), ("X", 2, perm[i])) for i in range(4)]
    full = dict(pairs)
    full.update({b: a for a, b in pairs})
    planar = 2 - 4 + _face_count(full) == 2
    if planar:
        d = build_diagram({"crossings": {1: 0, 2: 0}, "pairing": pairs})
        assert len(faces(d)) == 4
    else:
        with pytest.raises(NonSphere):
            build_diagram({"crossings": {1: 0, 2: 0}, "pairing": pairs})


def test_splice_refuses_free_loop():
    d = one_crossing_unknot()
    port = lambda k: ("P", k, 0)
    smoothing = Fragment((), ((port(0), port(1)), (port(2), port(3))), 4)
    with pytest.raises(FreeLoop):
        splice(d, {("X", 1)}, [port(1), port(0), port(3), port(2)], smoothing)


def test_split_faces_partition_half_edges():
    u, _ = disjoint_union(knot("3"), knot("3"))
    orbits = u.face_orbits()
    seen = [h for orb in orbits for h in orb]
    assert sorted(seen) == sorted(u.pairing)
    assert is_split_diagram(u)
    assert not is_split_diagram(knot("3"))


# -- alternation ----------------------------------------------------------------------

def test_alternating_examples():
    d = knot("3")
    assert is_alternating(d)
    flipped = Diagram({x: (1 - ax if x == 1 else ax) for x, ax in d.crossings.items()},
                      d.disks, d.pairing)
    assert not is_alternating(flipped)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_alternating_walk_matches_local_rule(seed):
    d = random_diagram(random.Random(seed))
    filled = Diagram(d.crossings, {b: Slope(1, 1) for b in d.disks}, d.pairing)
    assert is_alternating(filled) == is_alternating_local(filled)


# -- primeness ------------------------------------------------------------------------

def test_trefoil_segments():
    d = knot("3")
    assert max(segment_pair_counts(d).values()) <= 1
    assert prime_measure(d) == 0
    assert strongly_prime_outside_disks(d)


def test_connected_sum_segments():
    d = connected_sum(knot("3"), knot("3"))
    counts = segment_pair_counts(d)
    assert sorted(n for n in counts.values() if n >= 2) == [2]
    assert prime_measure(d) == 1
    assert not strongly_prime_outside_disks(d)


def test_one_crossing_unknot_segments():
    d = one_crossing_unknot()
    fi = d.face_index()
    sizes = {f: sum(1 for h in d.pairing if fi[h] == f) for f in set(fi.values())}
    outer = max(sizes, key=sizes.get)
    for pair in segment_pair_counts(d):
        assert outer in pair


# -- components and twists -------------------------------------------------------------

def test_component_counts():
    assert component_count(knot("3")) == 1
    assert component_count(knot("2")) == 2  # Hopf link
    d = Diagram({}, {1: None}, {("B", 1, 0): ("B", 1, 1), ("B", 1, 1): ("B", 1, 0),
                                ("B", 1, 2): ("B", 1, 3), ("B", 1, 3): ("B", 1, 2)})
    with pytest.raises(UnfilledDisk):
        component_count(d)


def test_twist_numbers():
    assert twist_number(knot("3")) == 1
    assert twist_number(knot("5/2")) == 2


def test_bare_strand_between_disks_fails_disk_arc_condition():
    pairs = {("B", 1, 0): ("B", 2, 1), ("B", 1, 1): ("B", 2, 0),
             ("B", 1, 2): ("B", 2, 3), ("B", 1, 3): ("B", 2, 2)}
    pairs.update({b: a for a, b in list(pairs.items())})
    d = Diagram({}, {1: None, 2: None}, pairs)
    assert not disk_arc_condition(d)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_expand_inlines_disks(seed):
    d = random_diagram(random.Random(seed), max_crossings=7, max_disks=2)
    filled = Diagram(d.crossings, {b: Slope(1, 1) for b in d.disks}, d.pairing)
    plain = expand(filled)[0]
    assert not plain.disks
    assert len(plain.crossings) == len(filled.crossings) + len(filled.disks)
    assert component_count(plain) == component_count(filled)
    assert twist_number(plain) == twist_number(filled)
