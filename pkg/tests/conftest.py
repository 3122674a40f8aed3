import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from gbsgroups import gog, ratlin

settings.register_profile("default", deadline=None, max_examples=60, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_matrix(rng, n, lo=-3, hi=3):
    while True:
        m = tuple(tuple(rng.randint(lo, hi) for _ in range(n)) for _ in range(n))
        if ratlin.det(m) != 0:
            return m


def random_gbs(rng, max_n=3, max_vertices=4, max_edges=5):
    """Random connected graph of Z^n groups with nonsingular edge matrices."""
    n = rng.randint(1, max_n)
    k = rng.randint(1, max_vertices)
    vertices = [f"v{i}" for i in range(k)]
    ends = []
    for i in range(1, k):
        ends.append((vertices[rng.randrange(i)], vertices[i]))
    extra = rng.randint(0 if k > 1 else 1, max_edges - (k - 1))
    for _ in range(extra):
        ends.append((rng.choice(vertices), rng.choice(vertices)))
    rng.shuffle(ends)
    edge_ids = tuple(f"e{i}" for i in range(len(ends)))
    endpoints = dict(zip(edge_ids, ends))
    sigma = {}
    for eid in edge_ids:
        sigma[(eid, 1)] = random_matrix(rng, n)
        sigma[(eid, -1)] = random_matrix(rng, n)
    tree = gog.default_tree(vertices, edge_ids, endpoints)
    orientation = {eid: rng.choice((1, -1)) for eid in edge_ids}
    return gog.make_gbs(n, tuple(vertices), edge_ids, endpoints, sigma, tree, orientation,
                        rng.choice(vertices))


@st.composite
def gbs_data(draw, max_n=3, max_vertices=4, max_edges=5):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_gbs(random.Random(seed), max_n, max_vertices, max_edges)


@pytest.fixture
def bs23():
    return gog.builtin("bs", 2, 3)


@pytest.fixture
def bs12():
    return gog.builtin("bs", 1, 2)


def defining_relations(g):
    """Pairs (lhs, rhs) of words equal in G: one per edge and basis vector."""
    from gbsgroups import ratlin as rl
    from gbsgroups.modmap import Stable, VertexGen

    out = []
    for eid in g.edge_ids:
        e = g.a_edge(eid)
        ebar = (eid, -e[1])
        for k in range(g.n):
            z = tuple(1 if i == k else 0 for i in range(g.n))
            into_head = VertexGen(g.head(e), tuple(rl.mat_vec(g.sigma[e], z)))
            into_tail = VertexGen(g.tail(e), tuple(rl.mat_vec(g.sigma[ebar], z)))
            if eid in g.tree:
                out.append(((into_head,), (into_tail,)))
            else:
                out.append(((Stable(eid, 1), into_head, Stable(eid, -1)), (into_tail,)))
    return out
