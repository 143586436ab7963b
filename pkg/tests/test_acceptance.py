"""Acceptance checks, one per criterion, at the stated tolerances.

Each test records a PASS/FAIL line (printed in the terminal summary) before
asserting, so the report is complete even when an assertion fails.
"""
import time
from fractions import Fraction
from math import gcd

import pytest

from conftest import ACCEPTANCE, seeded_input
from oracles import (TRANSPOSITIONS, all_transposition_tuples, brute_force_depth,
                     compose_perms, cover_chi_by_cells, evaluate_terms,
                     tangle_fraction_oracle)

from linkvol.covers import (bridge_cover_genus, compose, cover_euler_characteristic,
                            enumerate_simple3_colorings, group_orbits, is_three_colored,
                            max_degree_for_budget, pb_genus_bounds)
from linkvol.diagram import DiagramError
from linkvol.moves import (MoveError, crossing_sign, edge_pair_site, montesinos_move,
                           twist_site)
from linkvol.pipeline import (build_strand_graph, fill_representatives,
                              link_volume_upper_bound, normalize_edge_signs, run_pipeline)
from linkvol.tangles import (NUMERATOR, Slope, build_rational_tangle, close_fragment,
                             depth, fragment_from_terms, shortest_expansion,
                             twist_region_count)


def record(n, ok, detail):
    ACCEPTANCE[n] = (bool(ok), detail)
    return ok


def lowest_terms(bound, allow_infinity=True):
    out = []
    for p in range(-bound, bound + 1):
        for q in range(0, bound + 1):
            if gcd(p, q) != 1 or (q == 0 and (p != 1 or not allow_infinity)):
                continue
            out.append(Slope(p, q))
    return out


# -- 1 ---------------------------------------------------------------------------------

def test_criterion_01_depth_matches_brute_force():
    slopes = [s for s in lowest_terms(40, allow_infinity=False)]
    t0 = time.time()
    ours = {s: depth(s) for s in slopes}
    elapsed = time.time() - t0
    mismatches = [s for s in slopes if ours[s] != brute_force_depth(Fraction(s.p, s.q), 8, 16)]
    # every mismatch: the shortest expansion needs a term outside |a| <= 16
    explained = all(
        max(abs(a) for a in shortest_expansion(s).terms) > 16
        and ours[s] < brute_force_depth(Fraction(s.p, s.q), 8, 16)
        for s in mismatches)
    wide = [s for s in mismatches if ours[s] != brute_force_depth(Fraction(s.p, s.q), 8, 40)]
    valid = all(evaluate_terms(shortest_expansion(s).terms) == Fraction(s.p, s.q) for s in slopes)
    ok = not mismatches and elapsed < 30 and valid
    record(1, ok, f"{len(slopes)} slopes, {len(mismatches)} mismatches against the |terms|<=16 box "
                  f"(all from terms beyond 16: {explained}; against |terms|<=40 on those: "
                  f"{len(wide)}), depth time {elapsed:.2f}s")
    assert valid and elapsed < 30
    assert not mismatches, f"{len(mismatches)} slopes need a term beyond the oracle's box"


# -- 2 ---------------------------------------------------------------------------------

def _fragment_alternating(frag):
    cross = frag.crossing_map()
    for a, b in frag.pairing:
        if a[0] == "X" and b[0] == "X":
            if (a[2] % 2 == cross[a[1]]) == (b[2] % 2 == cross[b[1]]):
                return False
    return True


def _calibrated(oracle_value):
    # the bracket reading returns -1/F for our drawing convention (fixed on 1/1, 2/1, 1/2)
    if oracle_value is None:
        return Fraction(0)
    if oracle_value == 0:
        return None
    return -1 / oracle_value


def test_criterion_02_tangle_round_trip():
    for s, want in ((Slope(1, 1), 1), (Slope(2, 1), 2), (Slope(1, 2), Fraction(1, 2))):
        assert _calibrated(tangle_fraction_oracle(build_rational_tangle(s).fragment)) == want
    slopes = lowest_terms(20)
    round_trip, alternating, twist_regular, twist_shortest = [], [], [], []
    for s in slopes:
        t = build_rational_tangle(s)
        got = _calibrated(tangle_fraction_oracle(t.fragment))
        want = None if s.q == 0 else Fraction(s.p, s.q)
        if got != want:
            round_trip.append(s)
        if not _fragment_alternating(t.fragment):
            alternating.append(s)
        if twist_region_count(t) != depth(s):
            twist_regular.append(s)
        short = fragment_from_terms(shortest_expansion(s).terms)
        if _calibrated(tangle_fraction_oracle(short)) != want or twist_region_count(short) != depth(s):
            twist_shortest.append(s)
    ok = not (round_trip or alternating or twist_regular)
    example = f" e.g. {twist_regular[0]}" if twist_regular else ""
    record(2, ok, f"{len(slopes)} slopes: round-trip failures {len(round_trip)}, non-alternating "
                  f"{len(alternating)}, alternating twist regions != depth {len(twist_regular)}"
                  f"{example}; shortest-form drawing (fraction and twist regions = depth) "
                  f"failures {len(twist_shortest)}")
    assert not round_trip and not alternating and not twist_shortest
    assert not twist_regular, (f"{len(twist_regular)} slopes: the alternating drawing has more "
                               "twist regions than the depth")


# -- 3 ---------------------------------------------------------------------------------

def _site_diagrams(n):
    """Two-bridge diagrams with nontrivial 3-colorings (determinant divisible by 3),
    in both mirror images; they have twist regions of every sign and length <= 2."""
    return [close_fragment(fragment_from_terms(terms), NUMERATOR)
            for terms in ([3], [-3], [1, 2], [-1, -2], [4, 2], [-4, -2])]


def _sites(d, n):
    if n == 0:
        fi = d.face_index()
        hs = sorted(d.pairing)
        return [edge_pair_site(d, a, b) for i, a in enumerate(hs) for b in hs[i + 1:]
                if fi[a] == fi[b] and d.edge_key(a) != d.edge_key(b)]
    sites = []
    for x in sorted(d.crossings):
        for s in range(4):
            try:
                site = twist_site(d, x, s, abs(n))
            except MoveError:
                continue
            if crossing_sign(d, x, s) * abs(n) == n:
                sites.append(site)
    return sites


PERM_OF = dict(zip(("12", "13", "23"), TRANSPOSITIONS))


def _outside_word(d, c, site_boundary):
    return [c.color_of(d, h) for h in site_boundary]


def test_criterion_03_montesinos_invariance():
    from linkvol.moves import _site_region
    t0 = time.time()
    checked = violations = 0
    per_n = dict.fromkeys(range(-2, 3), 0)
    seen = set()  # (n, colors at the four ends, k): each site coloring once
    for n in range(-2, 3):
        for d in _site_diagrams(n):
            colorings = enumerate_simple3_colorings(d)
            for site in _sites(d, n):
                removed, boundary, _, _ = _site_region(d, site)
                outside = [h for h in boundary if h[0] != "P"]
                for c in colorings:
                    pattern = tuple(_outside_word(d, c, outside))
                    for k in range(-2, 3):
                        if (n, len(outside), pattern, k) in seen:
                            continue
                        try:
                            new, c2, _ = montesinos_move(d, c, site, n, k)
                        except DiagramError:
                            continue  # precondition (three-colored site) not met
                        before = _outside_word(d, c, outside)
                        after = _outside_word(new, c2, outside)
                        pb = compose_perms(*(PERM_OF[x.value] for x in before))
                        pa = compose_perms(*(PERM_OF[x.value] for x in after))
                        seen.add((n, len(outside), pattern, k))
                        checked += 1
                        per_n[n] += 1
                        if before != after or pb != pa:
                            violations += 1
    elapsed = time.time() - t0
    ok = all(per_n.values()) and violations == 0 and elapsed < 5
    record(3, ok, f"{checked} (site, coloring, k) cases (per n: {per_n}), {violations} changed "
                  f"words, {elapsed:.2f}s")
    assert all(per_n.values()) and violations == 0
    assert elapsed < 5


# -- 4 ---------------------------------------------------------------------------------

def test_criterion_04_sign_normalization():
    failures = 0
    for seed in range(200):
        d, c, slopes = seeded_input(seed)
        filled = fill_representatives(d, slopes)
        try:
            out, _, _ = normalize_edge_signs(filled, c)
        except DiagramError:
            failures += 1
            continue
        if any(sign < 0 for sign in build_strand_graph(out).signs()):
            failures += 1
    record(4, failures == 0, f"200 seeded inputs, {failures} with a negative edge")
    assert failures == 0


# -- 5, 6, 8: one batch of 100 end-to-end runs ----------------------------------------

@pytest.fixture(scope="module")
def hundred_runs():
    t0 = time.time()
    runs, errors = [], []
    for seed in range(100):
        d, c, slopes = seeded_input(seed)
        try:
            runs.append(run_pipeline(d, c, slopes))
        except DiagramError as exc:
            errors.append((seed, repr(exc)))
    return runs, errors, time.time() - t0


def test_criterion_05_end_to_end_certificates(hundred_runs):
    runs, errors, elapsed = hundred_runs
    bad = [r for r, _, _ in runs if not r.ok]
    ok = not errors and not bad and elapsed < 120
    record(5, ok, f"{len(runs)} runs, {len(errors)} errors, {len(bad)} failed certificates, "
                  f"{elapsed:.1f}s")
    assert not errors, errors[:3]
    assert not bad
    assert elapsed < 120


def test_criterion_06_twist_bound(hundred_runs):
    runs, errors, _ = hundred_runs
    violations = [r for r, _, _ in runs if r.twist_number_isotoped > r.t_base + r.depth_sum]
    ok = not errors and not violations
    # t(K) is a minimum over diagrams of K; the drawing with each tangle from its
    # shortest expansion is one of them.  The alternating drawing is reported too.
    alt = sum(1 for r, _, _ in runs if r.twist_number_alternating > r.t_base + r.depth_sum)
    record(6, ok, f"{len(runs)} runs, {len(violations)} with t(K) > t_base + depth_sum "
                  f"(alternating drawing alone exceeds it in {alt})")
    assert not violations


def test_criterion_07_bound_formula():
    cases = [(0, 0, Fraction(1)), (5, 3, Fraction("10.1494")), (17, 9, Fraction(7, 3)),
             (2, 40, Fraction(1, 1000)), (123, 77, Fraction(355, 113))]
    wrong = [(t, s, c) for t, s, c in cases
             if link_volume_upper_bound(t, s, c) != 3 * c * (t + s)]
    d, c, slopes = seeded_input(7)
    for lc in (Fraction(2), Fraction(10149, 1000)):
        rep, _, _ = run_pipeline(d, c, slopes, lc)
        if not isinstance(rep.bound, Fraction) or rep.bound != 3 * lc * (rep.t_base + rep.depth_sum):
            wrong.append(("report", lc))
    record(7, not wrong, f"{len(cases) + 2} exact comparisons, {len(wrong)} wrong")
    assert not wrong


def test_criterion_08_termination_measures(hundred_runs):
    runs, _, _ = hundred_runs
    checked = violations = 0
    for rep, _, _ in runs:
        for r in rep.receipts:
            b, a = r.before, r.after
            if r.name == "reduce_segment_pair":
                checked += 1
                violations += not a["prime_measure"] < b["prime_measure"]
            elif r.name == "three_color_crossing":
                checked += 1
                violations += not a["one_colored"] < b["one_colored"]
            elif r.name == "knotify":
                checked += 1
                violations += not a["components"] < b["components"]
    record(8, violations == 0 and checked > 0,
           f"{checked} receipts checked over {len(runs)} runs, {violations} violations")
    assert checked > 0 and violations == 0


# -- 9, 10 -----------------------------------------------------------------------------

def test_criterion_09_cover_arithmetic():
    mismatches = 0
    total = 0
    for tup in all_transposition_tuples(8):
        total += 1
        perms = [tuple(i + 1 for i in p) for p in tup]
        counts = [len(group_orbits([p])) for p in perms]
        counts.append(len(group_orbits([compose(*perms)])))
        if cover_euler_characteristic(2, 3, counts) != cover_chi_by_cells(list(tup)):
            mismatches += 1
    genus_ok = all(bridge_cover_genus(b) == b - 2 for b in range(2, 13))
    pb_ok = [pb_genus_bounds(g)[1] for g in (0, 1, 2)] == [6, 12, 18] and \
        all(pb_genus_bounds(g)[0] == g for g in (0, 1, 2))
    ok = mismatches == 0 and genus_ok and pb_ok
    record(9, ok, f"{total} transposition tuples, {mismatches} Euler mismatches; "
                  f"bridge genus b-2: {genus_ok}; pB bounds 6/12/18: {pb_ok}")
    assert ok


def test_criterion_10_degree_budget():
    got = (max_degree_for_budget(7.22), max_degree_for_budget(2.0))
    record(10, got == (3, 0), f"7.22 -> {got[0]}, 2.0 -> {got[1]}")
    assert got == (3, 0)


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
