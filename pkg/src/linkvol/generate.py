"""Seeded random colored tangle diagrams with disks, for tests and batch runs."""
from __future__ import annotations

import random
from typing import Optional

from .covers import Coloring, enumerate_simple3_colorings, is_transitive
from .diagram import Diagram, DiagramError, vertex_of
from .tangles import Slope, close_fragment, fragment_from_terms, NUMERATOR


def _random_terms(rng: random.Random, budget: int) -> list:
    terms = []
    while budget > 0:
        a = rng.randint(1, min(3, budget))
        terms.append(a if not terms or rng.random() < 0.8 else -a)
        budget -= a
    return terms


def _disjoint_union(d1: Diagram, d2: Diagram) -> Diagram:
    shift = max(d1.crossings, default=0)
    bshift = max(d1.disks, default=-1) + 1
    ren = lambda h: (h[0], h[1] + (shift if h[0] == "X" else bshift), h[2])
    cross = dict(d1.crossings)
    cross.update({c + shift: ax for c, ax in d2.crossings.items()})
    disks = dict(d1.disks)
    disks.update({b + bshift: t for b, t in d2.disks.items()})
    pairing = dict(d1.pairing)
    pairing.update({ren(h): ren(p) for h, p in d2.pairing.items()})
    return Diagram(cross, disks, pairing)


def _to_disks(d: Diagram, chosen: list) -> Diagram:
    """Turn the chosen crossings into empty disks (ids 1, 2, ...)."""
    ren = {}
    disks = {}
    for i, x in enumerate(chosen, start=1):
        ren[x] = i
        disks[i] = None
    f = lambda h: ("B", ren[h[1]], h[2]) if h[0] == "X" and h[1] in ren else h
    cross = {x: ax for x, ax in d.crossings.items() if x not in ren}
    pairing = {f(h): f(p) for h, p in d.pairing.items()}
    return Diagram(cross, disks, pairing)


def random_diagram(rng: random.Random, max_crossings: int = 12, max_disks: int = 3,
                   split_chance: float = 0.1) -> Diagram:
    ndisks = rng.randint(1, max_disks)
    total = rng.randint(ndisks + 2, max_crossings + ndisks)
    d = close_fragment(fragment_from_terms(_random_terms(rng, total)), NUMERATOR)
    if rng.random() < split_chance and len(d.crossings) + 3 <= max_crossings + ndisks:
        other = close_fragment(fragment_from_terms([3]), NUMERATOR)
        d = _disjoint_union(d, other)
    xs = sorted(d.crossings)
    chosen = rng.sample(xs, min(ndisks, len(xs) - 1))
    d = _to_disks(d, chosen)
    # random crossing switches
    cross = {x: (1 - ax if rng.random() < 0.3 else ax) for x, ax in d.crossings.items()}
    return Diagram(cross, d.disks, d.pairing)


def random_colored_input(seed: int, max_crossings: int = 12, max_disks: int = 3,
                         attempts: int = 200):
    """A diagram with empty disks and a transitive coloring whose disk legs are
    single colored.  Deterministic in ``seed``."""
    rng = random.Random(seed)
    for _ in range(attempts):
        try:
            d = random_diagram(rng, max_crossings, max_disks)
        except DiagramError:
            continue
        if len(d.crossings) > max_crossings:
            continue
        cols = [c for c in enumerate_simple3_colorings(d, strict_disks=True) if is_transitive(c)]
        if cols:
            return d, rng.choice(cols)
    raise RuntimeError(f"no colorable diagram found for seed {seed}")


def random_slope(rng: random.Random, bound: int = 99) -> Slope:
    while True:
        p, q = rng.randint(-bound, bound), rng.randint(0, bound)
        try:
            return Slope(p, q)
        except ValueError:
            continue
