"""Finite graphs of Z^n groups: data model, validation, parsing, built-ins.

An oriented edge is a pair ``(edge_id, sign)``: sign ``+1`` is the direction
written in the document (``edge e: v -> w``) and ``-1`` its reverse.  For an
oriented edge ``e`` the matrix ``sigma[e]`` is the injection of the edge group
into the group at ``head(e)``.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import ratlin
from .ratlin import Matrix

OEdge = Tuple[str, int]

_IDENT = r"[A-Za-z_][A-Za-z0-9_.]*"


class GBSError(Exception):
    """Base class for input errors."""


class ParseError(GBSError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Issue:
    code: str
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    issues: Tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.issues


class ValidationError(GBSError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("; ".join(f"{i.code} at {i.location}: {i.message}" for i in report.issues))


class UnknownBuiltin(GBSError):
    pass


class BadParams(GBSError):
    pass


def bar(e: OEdge) -> OEdge:
    return (e[0], -e[1])


@dataclass(frozen=True, eq=False)
class GBSData:
    """A finite graph of Z^n's with a maximal tree, orientation and base vertex."""
    n: int
    vertices: Tuple[str, ...]
    edge_ids: Tuple[str, ...]
    endpoints: Dict[str, Tuple[str, str]]
    sigma: Dict[OEdge, Matrix]
    tree: frozenset
    orientation: Dict[str, int]
    base: str

    def _key(self):
        return (self.n, self.vertices, self.edge_ids,
                tuple(self.endpoints[e] for e in self.edge_ids),
                tuple((self.sigma[(e, 1)], self.sigma[(e, -1)]) for e in self.edge_ids),
                tuple(sorted(self.tree)),
                tuple(self.orientation[e] for e in self.edge_ids),
                self.base)

    def __eq__(self, other):
        return isinstance(other, GBSData) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def head(self, e: OEdge) -> str:
        a, b = self.endpoints[e[0]]
        return b if e[1] > 0 else a

    def tail(self, e: OEdge) -> str:
        a, b = self.endpoints[e[0]]
        return a if e[1] > 0 else b

    @cached_property
    def oriented_edges(self) -> Tuple[OEdge, ...]:
        return tuple((e, s) for e in self.edge_ids for s in (1, -1))

    def a_edge(self, edge_id: str) -> OEdge:
        """The member of the orientation A lying over ``edge_id``."""
        return (edge_id, self.orientation[edge_id])

    @cached_property
    def stable_ids(self) -> Tuple[str, ...]:
        """Edges of A minus T, in document order."""
        return tuple(e for e in self.edge_ids if e not in self.tree)

    @cached_property
    def tree_paths(self) -> Dict[str, Tuple[OEdge, ...]]:
        """Oriented tree path from the base vertex to every vertex."""
        paths = {self.base: ()}
        queue = deque([self.base])
        while queue:
            v = queue.popleft()
            for e in self.out_edges(v):
                if e[0] in self.tree and self.head(e) not in paths:
                    paths[self.head(e)] = paths[v] + (e,)
                    queue.append(self.head(e))
        return paths

    def out_edges(self, v: str) -> Tuple[OEdge, ...]:
        return self._out_edges[v]

    @cached_property
    def _out_edges(self) -> Dict[str, Tuple[OEdge, ...]]:
        out: Dict[str, List[OEdge]] = {v: [] for v in self.vertices}
        for e in self.oriented_edges:
            out[self.tail(e)].append(e)
        return {v: tuple(es) for v, es in out.items()}

    def tree_path(self, u: str, v: str) -> Tuple[OEdge, ...]:
        pu, pv = self.tree_paths[u], self.tree_paths[v]
        k = 0
        while k < len(pu) and k < len(pv) and pu[k] == pv[k]:
            k += 1
        return tuple(bar(e) for e in reversed(pu[k:])) + pv[k:]

    def index(self, e: OEdge) -> int:
        return abs(ratlin.det(self.sigma[e]))

    def replace(self, **changes) -> "GBSData":
        fields = dict(n=self.n, vertices=self.vertices, edge_ids=self.edge_ids,
                      endpoints=self.endpoints, sigma=self.sigma, tree=self.tree,
                      orientation=self.orientation, base=self.base)
        fields.update(changes)
        return make_gbs(**fields)


def validate(n, vertices, edge_ids, endpoints, sigma, tree, orientation, base) -> ValidationReport:
    issues: List[Issue] = []
    if n < 1:
        issues.append(Issue("bad-rank", "rank", f"rank must be positive, got {n}"))
    if not vertices:
        issues.append(Issue("empty", "vertices", "graph has no vertices"))
        return ValidationReport(tuple(issues))
    if len(set(vertices)) != len(vertices):
        issues.append(Issue("duplicate-vertex", "vertices", "duplicate vertex identifier"))
    if len(set(edge_ids)) != len(edge_ids):
        issues.append(Issue("duplicate-edge", "edges", "duplicate edge identifier"))
    vset = set(vertices)
    for e in edge_ids:
        a, b = endpoints[e]
        for v in (a, b):
            if v not in vset:
                issues.append(Issue("unknown-vertex", f"edge {e}", f"endpoint {v!r} is not a vertex"))
        for s in (1, -1):
            m = sigma.get((e, s))
            name = "sigma" if s > 0 else "sigma_bar"
            if m is None or len(m) != n or any(len(r) != n for r in m):
                issues.append(Issue("bad-shape", f"edge {e}", f"{name} must be {n}x{n}"))
            elif ratlin.det(m) == 0:
                issues.append(Issue("singular-matrix", f"edge {e}", f"{name} is singular"))
        if orientation.get(e) not in (1, -1):
            issues.append(Issue("bad-orientation", f"edge {e}", "orientation must be fwd or rev"))
    if base not in vset:
        issues.append(Issue("bad-base", "base", f"base {base!r} is not a vertex"))
    if issues:
        return ValidationReport(tuple(issues))
    # connectivity and tree
    adj: Dict[str, List[Tuple[str, str]]] = {v: [] for v in vertices}
    for e in edge_ids:
        a, b = endpoints[e]
        adj[a].append((b, e))
        adj[b].append((a, e))
    seen = {vertices[0]}
    stack = [vertices[0]]
    while stack:
        v = stack.pop()
        for w, _ in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if seen != vset:
        issues.append(Issue("disconnected", "graph", "graph is not connected"))
    unknown = set(tree) - set(edge_ids)
    if unknown:
        issues.append(Issue("bad-tree", "tree", f"unknown edges {sorted(unknown)}"))
    elif len(tree) != len(vertices) - 1:
        issues.append(Issue("bad-tree", "tree",
                            f"a spanning tree needs {len(vertices) - 1} edges, got {len(tree)}"))
    else:
        parent = {v: v for v in vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in tree:
            a, b = (find(x) for x in endpoints[e])
            if a == b:
                issues.append(Issue("bad-tree", f"edge {e}", "tree contains a cycle"))
                break
            parent[a] = b
    return ValidationReport(tuple(issues))


def make_gbs(n, vertices, edge_ids, endpoints, sigma, tree, orientation, base) -> GBSData:
    vertices = tuple(vertices)
    edge_ids = tuple(edge_ids)
    sigma = {k: ratlin.normalize(ratlin.as_matrix(v)) for k, v in sigma.items()}
    report = validate(n, vertices, edge_ids, endpoints, sigma, frozenset(tree), orientation, base)
    if not report.ok:
        raise ValidationError(report)
    return GBSData(n, vertices, edge_ids, dict(endpoints), sigma, frozenset(tree),
                   dict(orientation), base)


def default_tree(vertices: Sequence[str], edge_ids: Sequence[str],
                 endpoints: Dict[str, Tuple[str, str]]) -> frozenset:
    """BFS from the smallest vertex; ties broken by edge identifier."""
    if not vertices:
        return frozenset()
    start = min(vertices)
    seen = {start}
    tree = set()
    queue = deque([start])
    while queue:
        v = queue.popleft()
        incident = sorted(e for e in edge_ids if v in endpoints[e])
        for e in incident:
            a, b = endpoints[e]
            w = b if a == v else a
            if w not in seen:
                seen.add(w)
                tree.add(e)
                queue.append(w)
    return frozenset(tree)


# ---------------------------------------------------------------------------
# document format
# ---------------------------------------------------------------------------

_MATRIX = r"\[\s*\[.*?\]\s*\]"
_EDGE_RE = re.compile(
    rf"^edge\s+(?P<id>{_IDENT})\s*:\s*(?P<src>{_IDENT})\s*->\s*(?P<dst>{_IDENT})\s+"
    rf"sigma\s*=\s*(?P<sigma>{_MATRIX})\s+sigma_bar\s*=\s*(?P<sigma_bar>{_MATRIX})\s*$")
_RANK_RE = re.compile(r"^rank\s+n\s*=\s*(?P<n>-?\d+)\s*$")
_VERTEX_RE = re.compile(rf"^vertex\s+(?P<id>{_IDENT})\s*$")
_TREE_RE = re.compile(r"^tree\s*:(?P<body>.*)$")
_ORIENT_RE = re.compile(r"^orientation\s*:(?P<body>.*)$")
_BASE_RE = re.compile(rf"^base\s*:\s*(?P<id>{_IDENT})\s*$")
_ROW_RE = re.compile(r"\[([^\[\]]*)\]")


def _parse_matrix(text: str, lineno: int, col: int) -> Matrix:
    inner = text.strip()[1:-1]
    rows = []
    for m in _ROW_RE.finditer(inner):
        body = m.group(1).strip()
        try:
            rows.append(tuple(int(x) for x in body.split(",")) if body else ())
        except ValueError:
            raise ParseError(f"matrix entries must be integers: {text!r}", lineno, col + 1)
    leftover = _ROW_RE.sub("", inner).replace(",", "").strip()
    if leftover or not rows:
        raise ParseError(f"malformed matrix {text!r}", lineno, col + 1)
    return tuple(rows)


def parse(text: str) -> GBSData:
    n = None
    vertices: List[str] = []
    edge_ids: List[str] = []
    endpoints: Dict[str, Tuple[str, str]] = {}
    sigma: Dict[OEdge, Matrix] = {}
    tree: Optional[List[str]] = None
    orientation: Dict[str, int] = {}
    base: Optional[str] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        indent = len(line) - len(line.lstrip())
        line = line.strip()
        if not line:
            continue
        col = indent + 1
        if m := _RANK_RE.match(line):
            n = int(m.group("n"))
        elif m := _VERTEX_RE.match(line):
            vertices.append(m.group("id"))
        elif m := _EDGE_RE.match(line):
            eid = m.group("id")
            if eid in endpoints:
                raise ParseError(f"duplicate edge {eid!r}", lineno, col)
            edge_ids.append(eid)
            endpoints[eid] = (m.group("src"), m.group("dst"))
            sigma[(eid, 1)] = _parse_matrix(m.group("sigma"), lineno, indent + m.start("sigma"))
            sigma[(eid, -1)] = _parse_matrix(m.group("sigma_bar"), lineno,
                                             indent + m.start("sigma_bar"))
        elif m := _TREE_RE.match(line):
            body = m.group("body").strip()
            tree = [t.strip() for t in body.split(",")] if body else []
            if any(not re.fullmatch(_IDENT, t) for t in tree):
                raise ParseError(f"bad tree list {body!r}", lineno, indent + m.start("body") + 1)
        elif m := _ORIENT_RE.match(line):
            body = m.group("body").strip()
            for item in filter(None, (s.strip() for s in body.split(","))):
                im = re.fullmatch(rf"({_IDENT})\s*:\s*(fwd|rev)", item)
                if not im:
                    raise ParseError(f"bad orientation item {item!r}", lineno,
                                     indent + line.find(item) + 1)
                orientation[im.group(1)] = 1 if im.group(2) == "fwd" else -1
        elif m := _BASE_RE.match(line):
            base = m.group("id")
        else:
            word = line.split()[0]
            raise ParseError(f"unrecognised statement {word!r}", lineno, col)
    if n is None:
        raise ParseError("missing 'rank n = <int>' line")
    if tree is None:
        tree = default_tree(vertices, edge_ids, endpoints)
    for e in orientation:
        if e not in endpoints:
            raise ValidationError(ValidationReport((Issue("bad-orientation", f"edge {e}",
                                                          "orientation names an unknown edge"),)))
    orient = {e: orientation.get(e, 1) for e in edge_ids}
    if base is None:
        base = min(vertices) if vertices else ""
    return make_gbs(n, vertices, edge_ids, endpoints, sigma, tree, orient, base)


def _fmt_matrix(m: Matrix) -> str:
    return "[" + ",".join("[" + ",".join(str(x) for x in r) + "]" for r in m) + "]"


def render(g: GBSData) -> str:
    """Canonical document for ``g``; ``parse(render(g)) == g``."""
    lines = [f"rank n = {g.n}"]
    lines += [f"vertex {v}" for v in g.vertices]
    for e in g.edge_ids:
        a, b = g.endpoints[e]
        lines.append(f"edge {e}: {a} -> {b}  sigma = {_fmt_matrix(g.sigma[(e, 1)])}"
                     f"  sigma_bar = {_fmt_matrix(g.sigma[(e, -1)])}")
    lines.append("tree: " + ",".join(e for e in g.edge_ids if e in g.tree))
    lines.append("orientation: " + ",".join(
        f"{e}:{'fwd' if g.orientation[e] > 0 else 'rev'}" for e in g.edge_ids))
    lines.append(f"base: {g.base}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# built-in fixtures
# ---------------------------------------------------------------------------

def bs(m: int, n: int) -> GBSData:
    """Baumslag-Solitar group <t, b | t b^m t^-1 = b^n>."""
    if m == 0 or n == 0:
        raise BadParams("bs(m, n) needs m, n nonzero")
    return make_gbs(1, ["v"], ["e"], {"e": ("v", "v")},
                    {("e", 1): ((m,),), ("e", -1): ((n,),)}, [], {"e": 1}, "v")


def heisenberg() -> GBSData:
    return make_gbs(2, ["v"], ["e"], {"e": ("v", "v")},
                    {("e", 1): ((1, 0), (0, 1)), ("e", -1): ((1, 1), (0, 1))}, [], {"e": 1}, "v")


def z2_f2() -> GBSData:
    return make_gbs(2, ["v"], ["e1", "e2"], {"e1": ("v", "v"), "e2": ("v", "v")},
                    {("e1", 1): ((1, 0), (0, 1)), ("e1", -1): ((1, 2), (0, 1)),
                     ("e2", 1): ((1, 0), (0, 1)), ("e2", -1): ((1, 0), (2, 1))},
                    [], {"e1": 1, "e2": 1}, "v")


def tree_amalgam(m: Matrix) -> GBSData:
    m = ratlin.as_matrix(m)
    k = len(m)
    if k == 0 or any(len(r) != k for r in m):
        raise BadParams("tree-amalgam needs a square matrix")
    if ratlin.det(m) == 0:
        raise BadParams("tree-amalgam matrix must be nonsingular")
    return make_gbs(k, ["u", "w"], ["e"], {"e": ("u", "w")},
                    {("e", 1): ratlin.identity(k), ("e", -1): m}, ["e"], {"e": 1}, "u")


BUILTINS = ("bs", "heisenberg", "z2-f2", "tree-amalgam")


def builtin(name: str, *params: int) -> GBSData:
    if name == "bs":
        if len(params) != 2:
            raise BadParams("bs takes two integers m, n")
        return bs(*params)
    if name == "heisenberg":
        if params:
            raise BadParams("heisenberg takes no parameters")
        return heisenberg()
    if name == "z2-f2":
        if params:
            raise BadParams("z2-f2 takes no parameters")
        return z2_f2()
    if name == "tree-amalgam":
        if not params:
            return tree_amalgam(((1,),))
        k = int(round(len(params) ** 0.5))
        if k * k != len(params):
            raise BadParams("tree-amalgam takes the k*k entries of a square matrix")
        return tree_amalgam(tuple(tuple(params[i * k:(i + 1) * k]) for i in range(k)))
    raise UnknownBuiltin(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")


def parse_builtin_spec(spec: str) -> GBSData:
    """``"bs:2,3"`` style specification used by the CLI."""
    name, _, rest = spec.partition(":")
    try:
        params = [int(x) for x in rest.split(",") if x.strip()]
    except ValueError:
        raise BadParams(f"builtin parameters must be integers: {rest!r}")
    return builtin(name.strip(), *params)


# ---------------------------------------------------------------------------
# structure
# ---------------------------------------------------------------------------

def rank_d(g: GBSData) -> int:
    return len(g.edge_ids) - len(g.tree)


def reduce_graph(g: GBSData) -> GBSData:
    """Collapse tree edges with a unimodular side until none remain.

    Collapsing a tree edge ``e`` with ``sigma[e]`` unimodular absorbs
    ``head(e)`` into ``tail(e)``; every oriented edge that pointed into the
    absorbed vertex is re-targeted and its matrix is composed with
    ``sigma[bar e] @ sigma[e]^-1``.
    """
    while True:
        target = None
        for eid in g.edge_ids:
            if eid not in g.tree:
                continue
            for s in (1, -1):
                if g.index((eid, s)) == 1:
                    target = (eid, s)
                    break
            if target:
                break
        if target is None:
            return g
        g = _collapse(g, target)


def _collapse(g: GBSData, e: OEdge) -> GBSData:
    gone, keep = g.head(e), g.tail(e)
    theta = ratlin.normalize(ratlin.mat_mul(g.sigma[bar(e)], ratlin.mat_inv(g.sigma[e])))
    edge_ids = tuple(x for x in g.edge_ids if x != e[0])
    endpoints = {}
    sigma = {}
    for eid in edge_ids:
        a, b = g.endpoints[eid]
        endpoints[eid] = (keep if a == gone else a, keep if b == gone else b)
        for s in (1, -1):
            m = g.sigma[(eid, s)]
            if g.head((eid, s)) == gone:
                m = ratlin.normalize(ratlin.mat_mul(theta, m))
            sigma[(eid, s)] = m
    vertices = tuple(v for v in g.vertices if v != gone)
    base = keep if g.base == gone else g.base
    return make_gbs(g.n, vertices, edge_ids, endpoints, sigma, g.tree - {e[0]},
                    {x: g.orientation[x] for x in edge_ids}, base)


def spanning_trees(g: GBSData) -> Iterable[frozenset]:
    """All maximal trees of the underlying graph (small graphs only)."""
    from itertools import combinations
    k = len(g.vertices) - 1
    for combo in combinations(g.edge_ids, k):
        report = validate(g.n, g.vertices, g.edge_ids, g.endpoints, g.sigma, frozenset(combo),
                          g.orientation, g.base)
        if report.ok:
            yield frozenset(combo)
