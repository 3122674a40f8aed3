import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gbsgroups import gog
from gbsgroups.bstree import BASE, act, distance as tree_distance
from gbsgroups.embed import (DomainError, NotApplicable, component_distances, embed_point,
                             estimate_compression, hyperbolic_distance, make_map,
                             properness_profile, split_translation)
from gbsgroups.modmap import compute_modular, mu_eval
from gbsgroups.words import ball, default_generators, parse_word, word_inverse

from test_modmap import random_word


# -- hyperbolic plane -----------------------------------------------------------------

def test_hyperbolic_examples():
    assert hyperbolic_distance(2 + 3j, 2 + 3j) == 0
    assert abs(hyperbolic_distance(1j, 2 + 1j) - 2 * math.asinh(1)) < 1e-12
    assert abs(hyperbolic_distance(1j, 4j) - math.log(4)) < 1e-12


def test_hyperbolic_vertical_oracle():
    rng = random.Random(3)
    for _ in range(200):
        a, b = rng.uniform(0.01, 50), rng.uniform(0.01, 50)
        x = rng.uniform(-10, 10)
        assert abs(hyperbolic_distance(complex(x, a), complex(x, b)) - abs(math.log(b / a))) < 1e-10


@pytest.mark.parametrize("z,w", [(1j, 0j), (1 + 1j, 2 - 1j)])
def test_hyperbolic_domain(z, w):
    with pytest.raises(DomainError):
        hyperbolic_distance(z, w)


def test_hyperbolic_triangle_inequality():
    rng = random.Random(12345)

    def point():
        return complex(rng.uniform(-5, 5), math.exp(rng.uniform(-3, 3)))

    for _ in range(10 ** 4):
        x, y, z = point(), point(), point()
        assert hyperbolic_distance(x, z) <= hyperbolic_distance(x, y) + hyperbolic_distance(y, z) + 1e-12


@given(st.floats(-100, 100), st.floats(0.01, 100), st.floats(-100, 100), st.floats(0.01, 100))
def test_hyperbolic_symmetric(a, b, c, d):
    z, w = complex(a, b), complex(c, d)
    assert hyperbolic_distance(z, w) == pytest.approx(hyperbolic_distance(w, z), abs=1e-9)


# -- maps --------------------------------------------------------------------------------

@pytest.mark.parametrize("spec,case", [("bs:2,3", "generic"), ("bs:1,2", "n1"), ("bs:2,3", "d1"),
                                       ("z2-f2", "generic")])
def test_identity_goes_to_base_point(spec, case):
    g = gog.parse_builtin_spec(spec)
    emap = make_map(g, case)
    pt = embed_point(emap, ())
    assert pt["tree"] == BASE
    assert all(d == 0 for d in component_distances(emap, pt, pt))
    if case == "n1":
        assert pt["hyperbolic"] == 1j


@pytest.mark.parametrize("m", [1, 2, 5, -3, 40])
def test_n1_translation(bs12, m):
    pt = embed_point(make_map(bs12, "n1"), parse_word(bs12, f"b^{m}"))
    assert pt["hyperbolic"] == complex(m, 1)


def test_not_applicable():
    with pytest.raises(NotApplicable):
        make_map(gog.builtin("heisenberg"), "d1")
    with pytest.raises(NotApplicable):
        make_map(gog.builtin("heisenberg"), "n1")
    with pytest.raises(NotApplicable):
        make_map(gog.builtin("z2-f2"), "d1")


def test_generic_tree_equivariance(bs23):
    emap = make_map(bs23, "generic")
    rng = random.Random(7)
    for _ in range(100):
        w1, w2 = random_word(rng, bs23, 6), random_word(rng, bs23, 6)
        d = component_distances(emap, embed_point(emap, w1), embed_point(emap, w2))[0]
        # the action is by isometries, so this equals the displacement of w1^-1 w2
        assert d == tree_distance(act(bs23, word_inverse(w1) + w2, BASE), BASE)


def _hyperbolic_loop():
    return gog.parse("rank n = 2\nvertex v\nedge e: v -> v sigma = [[1,0],[0,1]] "
                     "sigma_bar = [[2,1],[1,1]]\n")


@pytest.mark.parametrize("g", [gog.builtin("bs", 2, 3), _hyperbolic_loop()])
def test_d1_split_reconstruction(g):
    emap = make_map(g, "d1")
    rng = random.Random(1)
    for _ in range(50):
        w = random_word(rng, g, 8)
        tr = np.array([float(x) for x in mu_eval(emap.md, g, w).translation])
        vp, vm = split_translation(emap, tr)
        back = emap.basis_plus @ vp + emap.basis_minus @ vm
        assert np.linalg.norm(back - tr) <= 1e-9 * max(1.0, np.linalg.norm(tr))


def _generator_bound(emap):
    origin = embed_point(emap, ())
    gens = default_generators(emap.g)
    return max(sum(component_distances(emap, origin, embed_point(emap, (s,)))) for s in gens)


@pytest.mark.parametrize("spec,r_max", [("bs:2,3", 6), ("z2-f2", 5), ("bs:1,2", 6)])
def test_properness_upper_bound(spec, r_max):
    g = gog.parse_builtin_spec(spec)
    emap = make_map(g, "generic")
    prof = properness_profile(emap, r_max)
    c = _generator_bound(emap)
    assert prof[0] == 0
    assert all(prof[r] <= c * r + c for r in range(r_max + 1))


def test_properness_bs23():
    g = gog.builtin("bs", 2, 3)
    prof = properness_profile(make_map(g, "generic"), 8)
    assert all(v > 0 for v in prof[1:])


def test_properness_z2f2():
    prof = properness_profile(make_map(gog.builtin("z2-f2"), "generic"), 6)
    assert all(v > 0 for v in prof[1:])
    smooth = [min(prof[r], prof[r + 1]) for r in range(1, 6)]
    assert all(a <= b + 1e-12 for a, b in zip(smooth, smooth[1:]))


def test_compression_zn_bilipschitz():
    g = gog.parse("rank n = 2\nvertex v\n")
    est = estimate_compression(make_map(g, "generic"), 8)
    assert est.exponent >= 0.95
    assert 0 <= est.band[0] <= est.exponent <= est.band[1] <= 1
    assert est.qi_constants is not None


def test_compression_deterministic(bs12):
    emap = make_map(bs12, "generic")
    a = estimate_compression(emap, 6, seed=5, max_pairs=200)
    b = estimate_compression(emap, 6, seed=5, max_pairs=200)
    assert a.as_dict() == b.as_dict()


def test_n1_log_distance(bs12):
    emap = make_map(bs12, "n1")
    origin = embed_point(emap, ())
    for m in (4, 7, 16, 33, 100, 256):
        pt = embed_point(emap, parse_word(bs12, f"b^{m}"))
        d = sum(x ** 2 for x in component_distances(emap, origin, pt)) ** 0.5
        assert abs(d - 2 * math.log(m)) <= 2
