"""End-to-end acceptance checks.  Each test prints one PASS/FAIL line."""
import itertools
import math
import random
import time
from fractions import Fraction

import pytest

from gbsgroups import gog, ratlin
from gbsgroups.bstree import act, degree, tree_ball, verify_certificate
from gbsgroups.embed import estimate_compression, hyperbolic_distance, make_map, properness_profile
from gbsgroups.modmap import Stable, VertexGen, compute_modular, mu_eval
from gbsgroups.verdicts import (AMENABLE, NO, NON_AMENABLE, YES, closure_amenability,
                                compression_report, decide_amenable, distortion_report,
                                distortion_witness, haagerup_report, verify_schottky)
from gbsgroups.words import free_reduce, normal_form

from conftest import defining_relations, random_gbs


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance {n}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


def test_01_modular_golden(report):
    start = time.perf_counter()
    ok = True
    for m, n in [(1, 2), (2, 3), (3, 5)]:
        md = compute_modular(gog.builtin("bs", m, n))
        ok &= md.mu_stable["e"] == ((Fraction(n, m),),)
    ok &= compute_modular(gog.builtin("heisenberg")).mu_stable["e"] == ((1, 1), (0, 1))
    z = compute_modular(gog.builtin("z2-f2")).mu_stable
    ok &= z == {"e1": ((1, 2), (0, 1)), "e2": ((1, 0), (2, 1))}
    elapsed = time.perf_counter() - start
    report(1, ok and elapsed < 1, f"golden modular values exact in {elapsed:.3f}s")


def test_02_relation_preservation(report):
    start = time.perf_counter()
    rng = random.Random(20240601)
    bad = 0
    for _ in range(200):
        g = random_gbs(rng, max_n=3, max_vertices=4, max_edges=5)
        md = compute_modular(g)
        for lhs, rhs in defining_relations(g):
            if not (mu_eval(md, g, lhs) @ mu_eval(md, g, rhs).inverse()).is_identity():
                bad += 1
    elapsed = time.perf_counter() - start
    report(2, bad == 0 and elapsed < 30, f"200 random graphs, {bad} failing relations, {elapsed:.1f}s")


def _all_words(g, max_len):
    v = g.base
    e = g.stable_ids[0]
    letters = [VertexGen(v, (1,)), VertexGen(v, (-1,)), Stable(e, 1), Stable(e, -1)]
    for k in range(max_len + 1):
        yield from itertools.product(letters, repeat=k)


def _oracle_disagreements(g, radius=8, max_len=6):
    md = compute_modular(g)
    ball = tree_ball(g, radius).vertices
    cache = {}
    disagreements = checked = 0
    for w in _all_words(g, max_len):
        key = free_reduce(w)
        if key not in cache:
            trivial = mu_eval(md, g, key).is_identity() and all(act(g, key, x) == x for x in ball)
            cache[key] = trivial
        checked += 1
        if normal_form(g, w).is_identity() != cache[key]:
            disagreements += 1
    return checked, disagreements


def test_03_word_problem_oracle(report):
    start = time.perf_counter()
    lines = []
    total = 0
    for m, n in [(1, 2), (2, 3)]:
        checked, bad = _oracle_disagreements(gog.builtin("bs", m, n))
        lines.append(f"bs({m},{n}) {checked} words {bad} disagreements")
        total += bad
    elapsed = time.perf_counter() - start
    report(3, total == 0 and elapsed < 120, "; ".join(lines) + f"; {elapsed:.1f}s")


def test_04_amenability(report):
    details, ok = [], True
    for n in (2, 3, 4):
        v = decide_amenable(gog.builtin("bs", 1, n), depth=6)
        ok &= v.status == AMENABLE and v.reason == "AscendingHNN"
        details.append(f"bs(1,{n}) {v.reason}")
    for spec in ("bs:2,3", "bs:3,5", "z2-f2"):
        g = gog.parse_builtin_spec(spec)
        v = decide_amenable(g, depth=6)
        replay = v.certificate is not None and verify_certificate(g, v.certificate)
        ok &= v.status == NON_AMENABLE and replay
        details.append(f"{spec} {v.status} replay={replay}")
    v = decide_amenable(gog.builtin("tree-amalgam", 1, 0, 0, 1))
    ok &= v.status == AMENABLE
    details.append(f"identity amalgam {v.reason}")
    report(4, ok, "; ".join(details))


def test_05_haagerup_table(report):
    expected = {"bs:2,3": (YES, YES, 1), "heisenberg": (YES, YES, 1),
                "tree-amalgam:2,0,0,3": (YES, YES, 1), "z2-f2": (NO, NO, None)}
    got = {}
    for spec in expected:
        r = haagerup_report(gog.parse_builtin_spec(spec))
        got[spec] = (r.haagerup, r.weakly_amenable, r.lam)
    g = gog.builtin("z2-f2")
    md = compute_modular(g)
    schottky = verify_schottky(md, closure_amenability(md, g).certificate)
    report(5, got == expected and schottky, f"{got}; z2-f2 Schottky replay={schottky}")


def test_06_distortion(report):
    bs12 = gog.builtin("bs", 1, 2)
    r1 = distortion_report(compute_modular(bs12), bs12)
    witnesses = all(distortion_witness(bs12, k) for k in range(1, 9))
    heis = gog.builtin("heisenberg")
    r2 = distortion_report(compute_modular(heis), heis)
    full = r2.distal_dimension == 2
    ok = r1.exp_distorted == YES and witnesses and r2.exp_distorted == NO and full
    report(6, ok, f"bs(1,2) {r1.exp_distorted}, |b^(2^k)| <= 2k+1 for k<=8: {witnesses}; "
                  f"heisenberg {r2.exp_distorted}, distal dimension {r2.distal_dimension}")


def test_07_compression(report):
    bs23 = gog.builtin("bs", 2, 3)
    got = {p: compression_report(bs23, p) for p in (1, 2, 4)}
    ok = all(r.alpha_p == 1 for r in got.values())
    ok &= [got[p].alpha_p_sharp for p in (1, 2, 4)] == [Fraction(1), Fraction(1, 2), Fraction(1, 2)]
    sharp12 = compression_report(gog.builtin("bs", 1, 2), 2).alpha_p_sharp
    ok &= sharp12 == 1
    report(7, ok, f"bs(2,3) sharp {[str(got[p].alpha_p_sharp) for p in (1, 2, 4)]}; bs(1,2) sharp {sharp12}")


def test_08_tree_geometry(report):
    start = time.perf_counter()
    g = gog.builtin("bs", 2, 3)
    tb = tree_ball(g, 6)
    sizes = [len(tb.sphere(r)) for r in range(1, 7)]
    expected = [5 * 4 ** (r - 1) for r in range(1, 7)]
    elapsed = time.perf_counter() - start
    ok = degree(g, g.base) == 5 and sizes == expected and elapsed < 10
    report(8, ok, f"degree {degree(g, g.base)}, spheres {sizes}, {elapsed:.2f}s")


def test_09_hyperbolic(report):
    e1 = abs(hyperbolic_distance(1j, 2 + 1j) - 2 * math.asinh(1))
    e2 = abs(hyperbolic_distance(1j, 4j) - math.log(4))
    report(9, e1 < 1e-12 and e2 < 1e-12, f"errors {e1:.2e}, {e2:.2e}")


def test_10_properness(report):
    start = time.perf_counter()
    prof = properness_profile(make_map(gog.builtin("bs", 2, 3), "generic"), 8)
    tail_min = [min(prof[r:9]) for r in range(1, 9)]
    ok = all(v > 0 for v in prof[1:9])
    ok &= all(a <= b for a, b in zip(tail_min, tail_min[1:]))
    elapsed = time.perf_counter() - start
    report(10, ok and elapsed < 120, f"profile {[round(v, 3) for v in prof[1:]]}, {elapsed:.1f}s")


def test_11_compression_estimate(report):
    start = time.perf_counter()
    est = estimate_compression(make_map(gog.builtin("bs", 2, 3), "generic"), 10, seed=0)
    elapsed = time.perf_counter() - start
    ok = est.exponent >= 0.7 and est.seed == 0 and elapsed < 300
    report(11, ok, f"exponent {est.exponent:.3f} band {est.band[0]:.3f}..{est.band[1]:.3f} "
                   f"seed {est.seed}, {est.n_pairs} pairs, {elapsed:.1f}s")


def test_12_root_moduli(report):
    cases = {(-2, 1): (0, 0, 1), (1, -2, 1): (0, 2, 0), (1, -3, 1): (1, 0, 1), (1, 0, 1): (0, 2, 0)}
    got = {p: ratlin.classify_root_moduli(p) for p in cases}
    ok = all(got[p].counts == c and got[p].certified for p, c in cases.items())
    report(12, ok, ", ".join(f"{p}->{got[p].counts}" for p in cases))
