import random

import pytest
from hypothesis import given, strategies as st

from gbsgroups import gog
from gbsgroups.bstree import (BASE, Elliptic, Hyperbolic, RadiusTooSmall, act, degree, distance,
                              dynamics, geodesic, neighbors, ping_pong_search, tree_ball,
                              verify_certificate)
from gbsgroups.words import normal_form, parse_word, word_inverse
from conftest import defining_relations, gbs_data
from test_modmap import random_word


def test_neighbors_bs23(bs23):
    nb = neighbors(bs23, BASE)
    assert len(nb) == 5 and len(set(nb)) == 5


def test_neighbors_tree_amalgam_degree_formula():
    g = gog.builtin("tree-amalgam", 2, 0, 0, 3)
    nb = neighbors(g, BASE)
    assert len(nb) == degree(g, "u") == 6
    # w-vertices are leaves (sigma_e is the identity)
    assert all(len(neighbors(g, x)) == 1 for x in nb)


def test_neighbors_heisenberg():
    assert len(neighbors(gog.builtin("heisenberg"), BASE)) == 2


@given(gbs_data(max_n=2))
def test_degree_formula(g):
    tb = tree_ball(g, 2, cap=20000)
    for x in tb.vertices:
        if tb.dist[x] < 2:
            v = g.head(x[-1][1]) if x else g.base
            assert len(tb.adjacency[x]) == degree(g, v)
            assert len(set(tb.adjacency[x])) == len(tb.adjacency[x])


def test_act_examples(bs23):
    assert act(bs23, (), BASE) == BASE
    assert act(bs23, parse_word(bs23, "b"), BASE) == BASE
    tx = act(bs23, parse_word(bs23, "t"), BASE)
    assert distance(BASE, tx) == 1 and tx in neighbors(bs23, BASE)


@given(gbs_data(max_n=2), st.integers(0, 2 ** 31))
def test_act_is_left_action(g, seed):
    rng = random.Random(seed)
    w1, w2 = random_word(rng, g, 4), random_word(rng, g, 4)
    tb = tree_ball(g, 1, cap=5000)
    for x in tb.vertices[:10]:
        assert act(g, w1 + w2, x) == act(g, w1, act(g, w2, x))


@given(gbs_data(max_n=2), st.integers(0, 2 ** 31))
def test_act_isometry(g, seed):
    w = random_word(random.Random(seed), g, 5)
    tb = tree_ball(g, 2, cap=5000)
    pts = tb.vertices[:12]
    for x in pts:
        for y in pts:
            assert distance(act(g, w, x), act(g, w, y)) == distance(x, y)


@given(gbs_data(max_n=2), st.integers(0, 2 ** 31))
def test_action_respects_relations(g, seed):
    rng = random.Random(seed)
    tb = tree_ball(g, 1, cap=5000)
    for lhs, rhs in defining_relations(g):
        for x in tb.vertices[:6]:
            assert act(g, lhs, x) == act(g, rhs, x)


def test_dynamics_examples(bs23, bs12):
    assert dynamics(bs23, parse_word(bs23, "b")) == Elliptic(BASE)
    d = dynamics(bs23, parse_word(bs23, "t"))
    assert isinstance(d, Hyperbolic) and d.translation_length == 1
    assert len(d.axis_segment) >= 2 * d.translation_length + 1
    assert dynamics(bs12, parse_word(bs12, "b")) == Elliptic(BASE)


def test_dynamics_radius(bs23):
    with pytest.raises(RadiusTooSmall):
        dynamics(bs23, parse_word(bs23, "t t t"), search_radius=2)


def _first_vertices(g, k):
    """The first k vertices of the breadth-first walk from the base vertex."""
    seen, queue = [BASE], [BASE]
    while queue and len(seen) < k:
        for y in neighbors(g, queue.pop(0)):
            if y not in seen:
                seen.append(y)
                queue.append(y)
    return seen[:k]


@given(gbs_data(max_n=2), st.integers(0, 2 ** 31))
def test_dynamics_inverse_and_minimality(g, seed):
    w = random_word(random.Random(seed), g, 5)
    d1, d2 = dynamics(g, w), dynamics(g, word_inverse(w))
    assert type(d1) is type(d2) and d1.translation_length == d2.translation_length
    if isinstance(d1, Elliptic):
        assert act(g, w, d1.fixed) == d1.fixed
    else:
        p = d1.axis_point
        assert distance(p, act(g, w, p)) == d1.translation_length
    # translation length is a lower bound on displacement over a ball
    for x in _first_vertices(g, 40):
        assert distance(x, act(g, w, x)) >= d1.translation_length


def test_tree_ball_bs23_regular(bs23):
    tb = tree_ball(bs23, 5)
    assert [len(tb.sphere(r)) for r in range(6)] == [1] + [5 * 4 ** (r - 1) for r in range(1, 6)]


def test_geodesic():
    x = ((("a",), ("e", 1)), (("b",), ("e", 1)))
    y = ((("a",), ("e", 1)), (("c",), ("e", -1)))
    path = geodesic(x, y)
    assert path[0] == x and path[-1] == y and len(path) == distance(x, y) + 1


def test_dot_export(bs23):
    dot = tree_ball(bs23, 1).to_dot(bs23)
    assert dot.startswith("digraph") and dot.count("->") == 5


def test_ping_pong_bs23(bs23):
    cert = ping_pong_search(bs23, depth=6)
    assert cert is not None and verify_certificate(bs23, cert)
    assert cert.overlap_length < min(cert.ell_g, cert.ell_h)


def test_ping_pong_z2f2():
    g = gog.builtin("z2-f2")
    cert = ping_pong_search(g, depth=4)
    assert cert is not None and verify_certificate(g, cert)


def test_ping_pong_absent_bs12(bs12):
    assert ping_pong_search(bs12, depth=4) is None


def test_ping_pong_absent_heisenberg():
    assert ping_pong_search(gog.builtin("heisenberg"), depth=4) is None
