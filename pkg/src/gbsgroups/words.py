"""Elements of pi_1(G, X, T): path words, reduction, normal forms, balls.

A path word ``g_0 e_1 g_1 ... e_k g_k`` is stored as two tuples, ``edges``
(oriented edges) and ``groups`` (integer vectors, one more than edges);
``g_i`` lives in the vertex group at ``head(e_i)`` (``g_0`` at the base).
"""
from __future__ import annotations

import operator
import re
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import ratlin
from .gog import GBSData, OEdge, bar
from .modmap import MalformedWord, Stable, VertexGen, Word, check_word

DEFAULT_BALL_CAP = 10 ** 6


class ResourceLimit(RuntimeError):
    pass


@dataclass(frozen=True)
class PathWord:
    edges: Tuple[OEdge, ...]
    groups: Tuple[tuple, ...]

    @property
    def length(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class NormalForm(PathWord):
    """Reduced path word whose groups g_1..g_k are canonical coset representatives."""

    def is_identity(self) -> bool:
        return not self.edges and not any(self.groups[0])


FreeWord = Tuple[Tuple[str, int], ...]


def _vadd(u, v):
    return tuple(map(operator.add, u, v))


class _Context:
    """Per-graph lookup tables used by the hot loops."""

    def __init__(self, g: GBSData):
        self.g = g
        self.n = g.n
        self.zero = (0,) * g.n
        self.base = g.base
        self.head = {e: g.head(e) for e in g.oriented_edges}
        self.tail = {e: g.tail(e) for e in g.oriented_edges}
        self.splitter = {}
        self.carry = {}
        for e in g.oriented_edges:
            sp = ratlin.lattice_splitter(g.sigma[e])
            self.splitter[e] = sp
            # sigma[e](a) with a = coeffs @ y is transported to sigma[bar e](a)
            self.carry[e] = ratlin.normalize(ratlin.mat_mul(g.sigma[bar(e)], sp.coeffs))
        self.stable_edge = {eid: g.a_edge(eid) for eid in g.stable_ids}
        # rank one: v = r + d*q with 0 <= r < d, carry = k*q
        self.scalar = {e: (sp.basis[0][0], self.carry[e][0][0])
                       for e, sp in self.splitter.items()} if g.n == 1 else None

    def split(self, e: OEdge, v) -> Tuple[tuple, tuple]:
        """v = r + sigma[e](a) with r canonical; returns (r, sigma[bar e](a))."""
        if self.scalar is not None:
            d, k = self.scalar[e]
            q, r = divmod(v[0], d)
            return (r,), (k * q,)
        r, y = self.splitter[e].split(v)
        if any(y):
            return r, ratlin.mat_vec(self.carry[e], y)
        return r, self.zero

    # -- stack-based reduction -------------------------------------------------
    def push_edge(self, E: list, G: list, f: OEdge) -> None:
        if E and f[0] == E[-1][0] and f[1] == -E[-1][1]:
            r, carry = self.split(E[-1], G[-1])
            if not any(r):
                E.pop()
                G.pop()
                G[-1] = _vadd(G[-1], carry)
                return
        E.append(f)
        G.append(self.zero)

    @staticmethod
    def push_group(G: list, z) -> None:
        if any(z):
            G[-1] = _vadd(G[-1], z)

    def push_tree_path(self, E, G, u: str, v: str) -> None:
        if u != v:
            for e in self.g.tree_path(u, v):
                self.push_edge(E, G, e)

    def push_letter(self, E, G, cur: str, letter) -> str:
        """Append ``letter`` to the path ending at ``cur``; return the new endpoint."""
        if isinstance(letter, VertexGen):
            self.push_tree_path(E, G, cur, letter.vertex)
            self.push_group(G, tuple(letter.z))
            return letter.vertex
        e = self.stable_edge[letter.edge]
        if letter.exponent < 0:
            e = bar(e)
        self.push_tree_path(E, G, cur, self.tail[e])
        self.push_edge(E, G, e)
        return self.head[e]

    def sweep_right(self, E, G) -> None:
        """Right-to-left normalisation: g_i -> canonical rep mod sigma[e_i]."""
        carry = None
        for i in range(len(E), 0, -1):
            v = G[i] if carry is None else _vadd(G[i], carry)
            G[i], carry = self.split(E[i - 1], v)
        if carry is not None and any(carry):
            G[0] = _vadd(G[0], carry)

    def sweep_left(self, E, G) -> tuple:
        """Left-to-right normalisation of a coset path; returns a tree address."""
        out = []
        carry = self.zero
        for i, e in enumerate(E):
            v = _vadd(G[i], carry) if any(carry) else G[i]
            r, carry = self.split(bar(e), v)
            out.append((r, e))
        return tuple(out)


def context(g: GBSData) -> _Context:
    ctx = g.__dict__.get("_words_ctx")
    if ctx is None:
        ctx = _Context(g)
        g.__dict__["_words_ctx"] = ctx
    return ctx


# ---------------------------------------------------------------------------
# path words and normal forms
# ---------------------------------------------------------------------------

def to_path_word(g: GBSData, w: Word) -> PathWord:
    """Unreduced path word at the base: tree paths are inserted verbatim."""
    check_word(g, w)
    ctx = context(g)
    E: List[OEdge] = []
    G: List[tuple] = [ctx.zero]
    cur = g.base

    def walk(u, v):
        for e in g.tree_path(u, v):
            E.append(e)
            G.append(ctx.zero)

    for letter in w:
        if isinstance(letter, VertexGen):
            walk(cur, letter.vertex)
            G[-1] = _vadd(G[-1], tuple(letter.z))
            cur = letter.vertex
        else:
            e = ctx.stable_edge[letter.edge]
            if letter.exponent < 0:
                e = bar(e)
            walk(cur, ctx.tail[e])
            E.append(e)
            G.append(ctx.zero)
            cur = ctx.head[e]
    walk(cur, g.base)
    return PathWord(tuple(E), tuple(G))


def reduce(g: GBSData, p: PathWord) -> PathWord:
    """Remove pinches e g bar(e) with g in sigma[e](Z^n), leftmost first."""
    ctx = context(g)
    E: List[OEdge] = []
    G: List[tuple] = [tuple(p.groups[0])]
    for e, z in zip(p.edges, p.groups[1:]):
        ctx.push_edge(E, G, e)
        ctx.push_group(G, tuple(z))
    return PathWord(tuple(E), tuple(G))


def _nf_from_lists(ctx: _Context, E, G) -> NormalForm:
    ctx.sweep_right(E, G)
    return NormalForm(tuple(E), tuple(G))


def normal_form(g: GBSData, w) -> NormalForm:
    """Canonical form; equal iff the elements are equal.  Accepts a Word or PathWord."""
    ctx = context(g)
    if isinstance(w, PathWord):
        p = reduce(g, w)
        return _nf_from_lists(ctx, list(p.edges), list(p.groups))
    check_word(g, w)
    E: List[OEdge] = []
    G: List[tuple] = [ctx.zero]
    cur = g.base
    for letter in w:
        cur = ctx.push_letter(E, G, cur, letter)
    ctx.push_tree_path(E, G, cur, g.base)
    return _nf_from_lists(ctx, E, G)


def identity_nf(g: GBSData) -> NormalForm:
    return NormalForm((), ((0,) * g.n,))


def nf_mul_letter(g: GBSData, nf: NormalForm, letter) -> NormalForm:
    ctx = context(g)
    E, G = list(nf.edges), list(nf.groups)
    cur = ctx.push_letter(E, G, g.base, letter)
    ctx.push_tree_path(E, G, cur, g.base)
    return _nf_from_lists(ctx, E, G)


def nf_mul(g: GBSData, a: NormalForm, b: NormalForm) -> NormalForm:
    ctx = context(g)
    E, G = list(a.edges), list(a.groups)
    ctx.push_group(G, b.groups[0])
    for e, z in zip(b.edges, b.groups[1:]):
        ctx.push_edge(E, G, e)
        ctx.push_group(G, z)
    return _nf_from_lists(ctx, E, G)


def nf_inverse(g: GBSData, a: NormalForm) -> NormalForm:
    ctx = context(g)
    E = [bar(e) for e in reversed(a.edges)]
    G = [tuple(-x for x in z) for z in reversed(a.groups)]
    return _nf_from_lists(ctx, E, G)


def nf_to_word(g: GBSData, nf: PathWord) -> Word:
    """Letters of a path word read in pi_1(G, X, T) (tree edges are trivial)."""
    out = []
    ctx = context(g)
    if any(nf.groups[0]):
        out.append(VertexGen(g.base, tuple(nf.groups[0])))
    for e, z in zip(nf.edges, nf.groups[1:]):
        if e[0] not in g.tree:
            out.append(Stable(e[0], 1 if e == ctx.stable_edge[e[0]] else -1))
        if any(z):
            out.append(VertexGen(ctx.head[e], tuple(z)))
    return tuple(out)


def phi(g: GBSData, w: Word) -> FreeWord:
    """Image in the free group on the stable letters (vertex groups die)."""
    out: List[Tuple[str, int]] = []
    for letter in w:
        if isinstance(letter, Stable):
            if out and out[-1] == (letter.edge, -letter.exponent):
                out.pop()
            else:
                out.append((letter.edge, letter.exponent))
    return tuple(out)


def free_distance(a: FreeWord, b: FreeWord) -> int:
    k = 0
    while k < len(a) and k < len(b) and a[k] == b[k]:
        k += 1
    return len(a) + len(b) - 2 * k


# ---------------------------------------------------------------------------
# word syntax
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"^(?:t_(?P<edge>[A-Za-z_][A-Za-z0-9_.]*)|(?P<t>t)(?P<tk>\d*)|(?P<b>b)(?P<bk>\d*)"
    r"(?:@(?P<vertex>[A-Za-z_][A-Za-z0-9_.]*))?)(?:\^(?P<exp>-?\d+))?$")


def parse_word(g: GBSData, text: str) -> Word:
    """``b1^3 * t_e1 * b2@w^-1``; bare ``b``/``t`` mean b1 and the unique stable letter."""
    letters: list = []
    for tok in filter(None, re.split(r"[\s*]+", text.strip())):
        if tok in ("1", "e", "id"):
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise MalformedWord(f"cannot parse token {tok!r}")
        exp = int(m.group("exp") or 1)
        if m.group("b"):
            k = int(m.group("bk") or 1)
            if not 1 <= k <= g.n:
                raise MalformedWord(f"generator index {k} out of range 1..{g.n}")
            v = m.group("vertex") or g.base
            if v not in g.vertices:
                raise MalformedWord(f"unknown vertex {v!r}")
            z = tuple(exp if i == k - 1 else 0 for i in range(g.n))
            if exp:
                letters.append(VertexGen(v, z))
            continue
        if m.group("edge"):
            eid = m.group("edge")
        elif m.group("tk"):
            k = int(m.group("tk"))
            if not 1 <= k <= len(g.stable_ids):
                raise MalformedWord(f"stable letter index {k} out of range")
            eid = g.stable_ids[k - 1]
        else:
            if len(g.stable_ids) != 1:
                raise MalformedWord("bare 't' needs exactly one stable letter")
            eid = g.stable_ids[0]
        if eid not in g.stable_ids:
            raise MalformedWord(f"{eid!r} is not a stable letter")
        sign = 1 if exp > 0 else -1
        letters.extend([Stable(eid, sign)] * abs(exp))
    return tuple(letters)


def word_str(g: GBSData, w: Word) -> str:
    parts = []
    for letter in w:
        if isinstance(letter, Stable):
            parts.append(f"t_{letter.edge}" + ("^-1" if letter.exponent < 0 else ""))
        else:
            at = "" if letter.vertex == g.base else f"@{letter.vertex}"
            for i, c in enumerate(letter.z):
                if c:
                    parts.append(f"b{i + 1}{at}" + ("" if c == 1 else f"^{c}"))
    return " * ".join(parts) if parts else "1"


def word_inverse(w: Word) -> Word:
    out = []
    for letter in reversed(w):
        if isinstance(letter, Stable):
            out.append(Stable(letter.edge, -letter.exponent))
        else:
            out.append(VertexGen(letter.vertex, tuple(-x for x in letter.z)))
    return tuple(out)


def free_reduce(w: Word) -> Word:
    """Cancel adjacent inverse letters and merge vertex generators at one vertex."""
    out: list = []
    for letter in w:
        if out and isinstance(letter, VertexGen) and isinstance(out[-1], VertexGen) \
                and out[-1].vertex == letter.vertex:
            z = _vadd(out[-1].z, letter.z)
            out.pop()
            if any(z):
                out.append(VertexGen(letter.vertex, z))
        elif out and isinstance(letter, Stable) and out[-1] == Stable(letter.edge, -letter.exponent):
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


# ---------------------------------------------------------------------------
# balls in the word metric
# ---------------------------------------------------------------------------

def default_generators(g: GBSData) -> Tuple[object, ...]:
    gens = []
    for v in g.vertices:
        for k in range(g.n):
            for s in (1, -1):
                gens.append(VertexGen(v, tuple(s if i == k else 0 for i in range(g.n))))
    for eid in g.stable_ids:
        gens += [Stable(eid, 1), Stable(eid, -1)]
    return tuple(gens)


@dataclass
class Ball:
    """Elements of word length <= radius, in breadth-first order."""
    radius: int
    generators: Tuple[object, ...]
    elements: List[NormalForm]
    length: Dict[NormalForm, int]
    word: Dict[NormalForm, Word]

    def __iter__(self) -> Iterator[Tuple[NormalForm, int]]:
        return ((x, self.length[x]) for x in self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def sphere(self, r: int) -> List[NormalForm]:
        return [x for x in self.elements if self.length[x] == r]


def ball(g: GBSData, radius: int, generators: Optional[Sequence] = None,
         cap: int = DEFAULT_BALL_CAP) -> Ball:
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    gens = tuple(generators) if generators is not None else default_generators(g)
    check_word(g, gens)
    one = identity_nf(g)
    elements = [one]
    length = {one: 0}
    word: Dict[NormalForm, Word] = {one: ()}
    frontier = [one]
    for r in range(1, radius + 1):
        nxt = []
        for x in frontier:
            wx = word[x]
            for s in gens:
                y = nf_mul_letter(g, x, s)
                if y not in length:
                    length[y] = r
                    word[y] = wx + (s,)
                    elements.append(y)
                    nxt.append(y)
                    if len(elements) > cap:
                        raise ResourceLimit(f"ball of radius {radius} exceeds {cap} elements")
        frontier = nxt
    return Ball(radius, gens, elements, length, word)
