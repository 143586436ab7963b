import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from oracles import TRANSPOSITIONS, compose_perms, cover_chi_by_cells

from linkvol.covers import (COLORS, BridgeTooSmall, Color, Coloring, arcs, boundary_monodromy,
                            bridge_cover_genus, conjugate, cover_euler_characteristic,
                            edge_colors_from_arcs, enumerate_simple3_colorings, is_transitive,
                            max_degree_for_budget, pb_genus_bounds, propagate,
                            validate_coloring, ColoringConflict)
from linkvol.diagram import Diagram
from linkvol.generate import random_colored_input, random_diagram
from linkvol.tangles import NUMERATOR, Slope, close_fragment, tangle_fragment

PERM = dict(zip(("12", "13", "23"), TRANSPOSITIONS))


def knot(s):
    return close_fragment(tangle_fragment(Slope.parse(s)), NUMERATOR)


def brute_force_colorings(d, strict_disks=False):
    """Count colorings by trying every color on every arc (arcs found here by
    joining the two over-slots of each crossing)."""
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            x = parent[x]
        return x

    keys = sorted({d.edge_key(h) for h in d.pairing})
    for k in keys:
        find(k)
    for x, ax in d.crossings.items():
        parent[find(d.edge_key(("X", x, ax)))] = find(d.edge_key(("X", x, ax + 2)))
    roots = sorted({find(k) for k in keys})
    count = 0
    for assign in product(range(3), repeat=len(roots)):
        col = dict(zip(roots, assign))
        of = lambda h: TRANSPOSITIONS[col[find(d.edge_key(h))]]
        ok = True
        for x, ax in d.crossings.items():
            o = of(("X", x, ax))
            u1, u2 = of(("X", x, 1 - ax)), of(("X", x, 3 - ax))
            if compose_perms(o, u1, o) != u2:
                ok = False
                break
        if ok:
            for b, content in d.disks.items():
                if content is not None or strict_disks:
                    if len({of(("B", b, k)) for k in range(4)}) != 1:
                        ok = False
        count += ok
    return count


# -- arcs and colorings ----------------------------------------------------------------

def test_arc_counts():
    assert len(arcs(knot("3"))) == 3
    assert len(arcs(knot("5/2"))) == 4
    # each leg of disk 1 runs straight to a leg of disk 2: four strands, four arcs
    pairs = {("B", 1, k): ("B", 2, (1 - k) % 4) for k in range(4)}
    pairs.update({b: a for a, b in list(pairs.items())})
    assert len(arcs(Diagram({}, {1: None, 2: None}, pairs))) == 4


def test_validate_examples():
    d = knot("3")
    mono = Coloring({k: Color.T12 for k in {d.edge_key(h) for h in d.pairing}})
    assert validate_coloring(d, mono)
    arc_list = arcs(d)
    three = edge_colors_from_arcs(d, {a.id: col for a, col in zip(arc_list, COLORS)})
    assert validate_coloring(d, three)
    assert is_transitive(three) and not is_transitive(mono)


def test_crossing_relation():
    assert conjugate(Color.T12, Color.T13) == Color.T23
    assert conjugate(Color.T12, Color.T12) == Color.T12
    d = knot("3")
    arc_list = arcs(d)
    bad = edge_colors_from_arcs(d, {arc_list[0].id: Color.T12, arc_list[1].id: Color.T12,
                                    arc_list[2].id: Color.T13})
    assert not validate_coloring(d, bad)


def test_transitivity_examples():
    assert is_transitive(Coloring({1: Color.T12, 2: Color.T13}))
    assert is_transitive(Coloring({1: Color.T12, 2: Color.T13, 3: Color.T23}))
    assert not is_transitive(Coloring({1: Color.T23}))


def test_enumeration_examples():
    trefoil = enumerate_simple3_colorings(knot("3"))
    assert len(trefoil) == 9
    assert sum(is_transitive(c) for c in trefoil) == 6
    fig8 = enumerate_simple3_colorings(knot("5/2"))
    assert len(fig8) == brute_force_colorings(knot("5/2")) == 3
    assert not any(is_transitive(c) for c in fig8)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.booleans())
def test_enumeration_matches_brute_force(seed, strict):
    d = random_diagram(random.Random(seed), max_crossings=6, max_disks=2)
    found = enumerate_simple3_colorings(d, strict_disks=strict)
    assert all(validate_coloring(d, c) for c in found)
    assert len({tuple(sorted(c.colors.items())) for c in found}) == len(found)
    assert len(found) == brute_force_colorings(d, strict)


def test_propagate_conflict():
    d = knot("3")
    a, b, c = arcs(d)
    # two arcs meeting at a crossing with equal colors force the third to match
    with pytest.raises(ColoringConflict):
        known = {}
        for arc, col in ((a, Color.T12), (b, Color.T12), (c, Color.T13)):
            for k in arc.edges:
                known[k] = col
        propagate(d, known)


# -- disk monodromy ---------------------------------------------------------------------

def _disk_with_legs(colors):
    # one empty disk whose legs NE-NW and SW-SE are joined outside
    pairs = {("B", 1, 0): ("B", 1, 1), ("B", 1, 2): ("B", 1, 3)}
    pairs.update({b: a for a, b in list(pairs.items())})
    d = Diagram({}, {1: None}, pairs)
    return d, Coloring({d.edge_key(("B", 1, k)): col for k, col in enumerate(colors)})


def test_single_colored_disk_monodromy():
    d, c = _disk_with_legs([Color.T12] * 4)
    m = boundary_monodromy(d, c, 1)
    assert m.product == (1, 2, 3)
    assert m.orbits == ((1, 2), (3,))


def test_two_colored_disk_monodromy():
    d, c = _disk_with_legs([Color.T12, Color.T12, Color.T13, Color.T13])
    m = boundary_monodromy(d, c, 1)
    assert m.product == (1, 2, 3)
    assert m.orbits == ((1, 2, 3),)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 4))
def test_random_disk_products_match_oracle(seed):
    d, c = random_colored_input(seed)
    for b in d.disks:
        legs = [PERM[c.color_of(d, ("B", b, k)).value] for k in range(4)]
        want = compose_perms(*legs)
        got = boundary_monodromy(d, c, b).product
        assert tuple(x - 1 for x in got) == want


# -- cover arithmetic --------------------------------------------------------------------

def test_euler_examples():
    assert cover_euler_characteristic(2, 3, [2, 2, 2, 2]) == 2
    assert cover_euler_characteristic(-4, 1, []) == -4
    for b in range(2, 8):
        assert cover_euler_characteristic(2, 3, [2] * (2 * b)) == 6 - 2 * b
    four = [TRANSPOSITIONS[0], TRANSPOSITIONS[1], TRANSPOSITIONS[1], TRANSPOSITIONS[0]]
    assert cover_chi_by_cells(four) == 2


def test_bridge_genus():
    assert [bridge_cover_genus(b) for b in (2, 3, 4)] == [0, 1, 2]
    with pytest.raises(BridgeTooSmall):
        bridge_cover_genus(1)


def test_pb_bounds():
    assert [pb_genus_bounds(g) for g in (0, 1, 2)] == [(0, 6), (1, 12), (2, 18)]


@pytest.mark.parametrize("v, p", [(7.22, 3), (2.0, 0), (4.06, 2), (6.0, 2), (6.01, 3)])
def test_degree_budget(v, p):
    assert max_degree_for_budget(v) == p
