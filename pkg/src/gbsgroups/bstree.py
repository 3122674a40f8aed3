"""The Bass-Serre tree: vertex addresses, the G-action, dynamics and ping-pong.

A tree vertex is addressed by a reduced coset path from the base vertex,
``((r_1, e_1), ..., (r_k, e_k))`` meaning ``r_1 e_1 r_2 e_2 ... r_k e_k G_v``
with ``r_i`` the canonical representative modulo ``sigma[bar e_i](Z^n)`` in the
group at ``tail(e_i)``.  The empty tuple is the base vertex ``G_{v0}``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import ratlin
from .gog import GBSData, OEdge, bar
from .modmap import Word
from .words import (DEFAULT_BALL_CAP, NormalForm, ResourceLimit, ball, context,
                    normal_form, parse_word, word_inverse, word_str)

TreeVertex = Tuple[Tuple[tuple, OEdge], ...]
BASE: TreeVertex = ()


class RadiusTooSmall(RuntimeError):
    pass


def vertex_type(g: GBSData, x: TreeVertex) -> str:
    return g.head(x[-1][1]) if x else g.base


def neighbors(g: GBSData, x: TreeVertex) -> List[TreeVertex]:
    """All neighbours in canonical order (edge order, then coset-rep order)."""
    out = []
    last = x[-1][1] if x else None
    for f in g.out_edges(vertex_type(g, x)):
        for r in ratlin.coset_reps(g.sigma[bar(f)]):
            if last is not None and f == bar(last) and not any(r):
                out.append(x[:-1])
            else:
                out.append(x + ((r, f),))
    return out


def degree(g: GBSData, v: str) -> int:
    return sum(abs(ratlin.det(g.sigma[e])) for e in g.oriented_edges if g.head(e) == v)


def _element_lists(g: GBSData, w: Union[Word, NormalForm]):
    ctx = context(g)
    if isinstance(w, NormalForm):
        return ctx, list(w.edges), list(w.groups)
    E: list = []
    G: list = [ctx.zero]
    cur = g.base
    for letter in w:
        cur = ctx.push_letter(E, G, cur, letter)
    ctx.push_tree_path(E, G, cur, g.base)
    return ctx, E, G


def act(g: GBSData, w: Union[Word, NormalForm], x: TreeVertex = BASE) -> TreeVertex:
    """Canonical address of w.x (left action)."""
    ctx, E, G = _element_lists(g, w)
    for r, e in x:
        ctx.push_group(G, r)
        ctx.push_edge(E, G, e)
    return ctx.sweep_left(E, G)


def distance(x: TreeVertex, y: TreeVertex) -> int:
    k = 0
    while k < len(x) and k < len(y) and x[k] == y[k]:
        k += 1
    return len(x) + len(y) - 2 * k


def geodesic(x: TreeVertex, y: TreeVertex) -> List[TreeVertex]:
    k = 0
    while k < len(x) and k < len(y) and x[k] == y[k]:
        k += 1
    up = [x[:i] for i in range(len(x), k - 1, -1)]
    down = [y[:i] for i in range(k + 1, len(y) + 1)]
    return up + down


def address_str(g: GBSData, x: TreeVertex) -> str:
    if not x:
        return "v0"
    parts = []
    for r, e in x:
        rep = ",".join(str(c) for c in r)
        parts.append(f"({rep}){e[0]}{'+' if e[1] > 0 else '-'}")
    return ".".join(parts)


# ---------------------------------------------------------------------------
# balls in the tree
# ---------------------------------------------------------------------------

@dataclass
class TreeBall:
    center: TreeVertex
    radius: int
    vertices: List[TreeVertex]
    dist: Dict[TreeVertex, int]
    adjacency: Dict[TreeVertex, List[TreeVertex]]

    def sphere(self, r: int) -> List[TreeVertex]:
        return [x for x in self.vertices if self.dist[x] == r]

    def edges(self) -> List[Tuple[TreeVertex, TreeVertex]]:
        return [(x, y) for x in self.vertices for y in self.adjacency[x]
                if self.dist[y] == self.dist[x] + 1]

    def to_dot(self, g: GBSData) -> str:
        lines = ["digraph bass_serre {"]
        ids = {x: i for i, x in enumerate(self.vertices)}
        for x in self.vertices:
            lines.append(f'  n{ids[x]} [label="{address_str(g, x)}"];')
        for x, y in self.edges():
            lines.append(f"  n{ids[x]} -> n{ids[y]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def tree_ball(g: GBSData, radius: int, center: TreeVertex = BASE,
              cap: int = DEFAULT_BALL_CAP) -> TreeBall:
    dist = {center: 0}
    order = [center]
    adjacency: Dict[TreeVertex, List[TreeVertex]] = {}
    queue = deque([center])
    while queue:
        x = queue.popleft()
        if dist[x] == radius:
            adjacency[x] = [y for y in neighbors(g, x) if y in dist]
            continue
        nbrs = neighbors(g, x)
        adjacency[x] = nbrs
        for y in nbrs:
            if y not in dist:
                dist[y] = dist[x] + 1
                order.append(y)
                queue.append(y)
                if len(order) > cap:
                    raise ResourceLimit(f"tree ball exceeds {cap} vertices")
    return TreeBall(center, radius, order, dist, adjacency)


# ---------------------------------------------------------------------------
# dynamics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Elliptic:
    fixed: TreeVertex
    translation_length: int = 0


@dataclass(frozen=True)
class Hyperbolic:
    translation_length: int
    axis_segment: Tuple[TreeVertex, ...]
    # a vertex on the axis, the midpoint of axis_segment
    axis_point: TreeVertex = ()


ElementDynamics = Union[Elliptic, Hyperbolic]


def _power(w: Word, k: int) -> Word:
    return tuple(w) * k if k >= 0 else word_inverse(w) * (-k)


def dynamics(g: GBSData, w: Word, search_radius: Optional[int] = None) -> ElementDynamics:
    """Elliptic/hyperbolic classification from d(x, gx) and d(x, g^2 x).

    For a tree isometry without inversions, l(g) = d(x, g^2 x) - d(x, gx)
    for every x, and the point of [x, gx] at distance (d(x,gx) - l)/2 from x
    is on the axis (or fixed when l = 0).
    """
    w = tuple(w)
    gx = act(g, w)
    d1 = len(gx)
    if search_radius is not None and d1 > search_radius:
        raise RadiusTooSmall(f"d(base, w.base) = {d1} exceeds the search radius {search_radius}")
    d2 = len(act(g, w, gx))
    ell = max(0, d2 - d1)
    path = geodesic(BASE, gx)
    p = path[(d1 - ell) // 2]
    if ell == 0:
        return Elliptic(p)
    left = act(g, word_inverse(w), p)
    right = act(g, w, p)
    return Hyperbolic(ell, tuple(geodesic(left, right)), p)


def axis_segment(g: GBSData, w: Word, dyn: Hyperbolic, half_powers: int) -> Tuple[TreeVertex, ...]:
    """The axis from w^-m p to w^m p (length 2 m l)."""
    p = dyn.axis_point
    return tuple(geodesic(act(g, _power(w, -half_powers), p), act(g, _power(w, half_powers), p)))


# ---------------------------------------------------------------------------
# ping-pong certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PingPongCertificate:
    """Two hyperbolic words whose axes meet in a finite segment shorter than
    both translation lengths (or are disjoint), so their endpoint pairs differ."""
    word_g: str
    word_h: str
    ell_g: int
    ell_h: int
    overlap_length: int          # -1 when the axes are disjoint
    bridge_length: int = 0       # distance between the axes when disjoint
    half_powers: int = 1

    def as_dict(self) -> dict:
        return {"g": self.word_g, "h": self.word_h, "translation_lengths": [self.ell_g, self.ell_h],
                "overlap_length": self.overlap_length, "bridge_length": self.bridge_length,
                "half_powers": self.half_powers}


def _compare_axes(seg1: Sequence[TreeVertex], seg2: Sequence[TreeVertex]) -> Optional[Tuple[int, int]]:
    """Certified (overlap_length, bridge_length) of the full axes, or None if
    the finite segments cannot decide it."""
    s2 = set(seg2)
    common = [x for x in seg1 if x in s2]
    interior1 = set(seg1[1:-1])
    interior2 = set(seg2[1:-1])
    if common:
        # the overlap is a subpath; its ends must be interior to both segments
        ends = (common[0], common[-1])
        if all(x in interior1 and x in interior2 for x in ends):
            return len(common) - 1, 0
        return None
    best = None
    for x in seg1:
        for y in seg2:
            d = distance(x, y)
            if best is None or d < best[0]:
                best = (d, x, y)
    d, x, y = best
    if x in interior1 and y in interior2:
        return -1, d
    return None


class _AxisCache:
    """Axis segments of one hyperbolic word, computed once per power."""

    def __init__(self, g: GBSData, w: Word, dyn: Hyperbolic):
        self.g, self.w, self.dyn = g, w, dyn
        self._segs: Dict[int, Tuple[tuple, frozenset, frozenset]] = {}

    def get(self, m: int):
        if m not in self._segs:
            seg = axis_segment(self.g, self.w, self.dyn, m)
            self._segs[m] = (seg, frozenset(seg), frozenset(seg[1:-1]))
        return self._segs[m]


def _compare_cached(a, b) -> Optional[Tuple[int, int]]:
    seg1, set1, int1 = a
    seg2, set2, int2 = b
    if set1.isdisjoint(set2):
        return _compare_axes(seg1, seg2)
    common = [x for x in seg1 if x in set2]
    if common[0] in int1 and common[0] in int2 and common[-1] in int1 and common[-1] in int2:
        return len(common) - 1, 0
    return None


def _half_powers(ell: int, min_half_length: int) -> int:
    return max(1, -(-min_half_length // ell))


def _check_cached(c1: _AxisCache, c2: _AxisCache, min_half_length: int,
                  max_doublings: int) -> Optional[PingPongCertificate]:
    l1, l2 = c1.dyn.translation_length, c2.dyn.translation_length
    m = _half_powers(min(l1, l2), min_half_length)
    for _ in range(max_doublings + 1):
        res = _compare_cached(c1.get(m), c2.get(m))
        if res is not None:
            overlap, bridge = res
            if overlap < min(l1, l2):
                return PingPongCertificate(word_str(c1.g, c1.w), word_str(c2.g, c2.w),
                                           l1, l2, overlap, bridge, m)
            return None
        m *= 2
    return None


def check_pair(g: GBSData, w1: Word, dyn1: Hyperbolic, w2: Word, dyn2: Hyperbolic,
               min_half_length: int = 8, max_doublings: int = 2) -> Optional[PingPongCertificate]:
    return _check_cached(_AxisCache(g, w1, dyn1), _AxisCache(g, w2, dyn2),
                         min_half_length, max_doublings)


def verify_certificate(g: GBSData, cert: PingPongCertificate) -> bool:
    """Replay a certificate from its words alone."""
    w1, w2 = parse_word(g, cert.word_g), parse_word(g, cert.word_h)
    d1, d2 = dynamics(g, w1), dynamics(g, w2)
    if not (isinstance(d1, Hyperbolic) and isinstance(d2, Hyperbolic)):
        return False
    if (d1.translation_length, d2.translation_length) != (cert.ell_g, cert.ell_h):
        return False
    res = _compare_axes(axis_segment(g, w1, d1, cert.half_powers),
                        axis_segment(g, w2, d2, cert.half_powers))
    if res is None:
        return False
    return res == (cert.overlap_length, cert.bridge_length) and \
        cert.overlap_length < min(cert.ell_g, cert.ell_h)


def ping_pong_search(g: GBSData, depth: int = 6, radius: int = 8,
                     cap: int = DEFAULT_BALL_CAP) -> Optional[PingPongCertificate]:
    """First certificate among pairs of ball elements in breadth-first order.

    Pairs whose segments cannot decide the overlap (typically axes sharing an
    end, as in ascending HNN extensions) are retried with doubled powers up to
    twice, then skipped."""
    b = ball(g, depth, cap=cap)
    seen: List[_AxisCache] = []
    for x in b.elements:
        w = b.word[x]
        if not w:
            continue
        dyn = dynamics(g, w)
        if not isinstance(dyn, Hyperbolic):
            continue
        c = _AxisCache(g, w, dyn)
        for c0 in seen:
            cert = _check_cached(c0, c, radius, 2)
            if cert is not None:
                return cert
        seen.append(c)
    return None
