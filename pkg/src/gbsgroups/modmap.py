"""The modular homomorphism mu: G -> R^n x| GL_n(Q), computed exactly."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Sequence, Tuple

from . import ratlin
from .gog import GBSData, OEdge, bar
from .ratlin import Matrix


class MalformedWord(ValueError):
    pass


@dataclass(frozen=True)
class VertexGen:
    vertex: str
    z: tuple


@dataclass(frozen=True)
class Stable:
    edge: str
    exponent: int


Word = Tuple[object, ...]


@dataclass(frozen=True)
class AffineMap:
    """x -> linear @ x + translation."""
    linear: Matrix
    translation: tuple

    @staticmethod
    def identity(n: int) -> "AffineMap":
        return AffineMap(ratlin.identity(n), ratlin.zero_vector(n))

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        return AffineMap(ratlin.normalize(ratlin.mat_mul(self.linear, other.linear)),
                         ratlin.normalize_vec(ratlin.vec_add(
                             self.translation, ratlin.mat_vec(self.linear, other.translation))))

    def inverse(self) -> "AffineMap":
        inv = ratlin.mat_inv(self.linear)
        return AffineMap(inv, ratlin.normalize_vec(ratlin.vec_neg(ratlin.mat_vec(inv, self.translation))))

    def __call__(self, x: Sequence) -> tuple:
        return ratlin.normalize_vec(ratlin.vec_add(ratlin.mat_vec(self.linear, x), self.translation))

    def is_identity(self) -> bool:
        n = len(self.linear)
        return self.linear == ratlin.identity(n) and not any(self.translation)


@dataclass(frozen=True)
class ModularData:
    tau: Dict[str, Matrix]
    mu_stable: Dict[str, Matrix]


def epsilon(g: GBSData, v: str, edge_id: str) -> int:
    """+1 / -1 / 0 according to whether the A-edge over ``edge_id`` lies on
    the tree path from the base to ``v`` pointing away from / towards the base."""
    e = g.a_edge(edge_id)
    path = g.tree_paths[v]
    if e in path:
        return 1
    if bar(e) in path:
        return -1
    return 0


def edge_ratio(g: GBSData, e: OEdge) -> Matrix:
    """sigma[bar e] @ sigma[e]^-1."""
    return ratlin.normalize(ratlin.mat_mul(g.sigma[bar(e)], ratlin.mat_inv(g.sigma[e])))


def compute_modular(g: GBSData) -> ModularData:
    # walking from the base, the factor of the edge nearest the base sits leftmost
    tau: Dict[str, Matrix] = {}
    for v, path in g.tree_paths.items():
        m = ratlin.identity(g.n)
        for e in path:
            m = ratlin.mat_mul(m, edge_ratio(g, e))
        tau[v] = ratlin.normalize(m)
    mu = {}
    for eid in g.stable_ids:
        e = g.a_edge(eid)
        m = ratlin.mat_mul(tau[g.tail(e)], edge_ratio(g, e))
        mu[eid] = ratlin.normalize(ratlin.mat_mul(m, ratlin.mat_inv(tau[g.head(e)])))
    return ModularData(tau, mu)


def check_word(g: GBSData, w: Word) -> None:
    for letter in w:
        if isinstance(letter, VertexGen):
            if letter.vertex not in g.vertices:
                raise MalformedWord(f"unknown vertex {letter.vertex!r}")
            if len(letter.z) != g.n:
                raise MalformedWord(f"vertex generator needs {g.n} coordinates")
        elif isinstance(letter, Stable):
            if letter.edge not in g.stable_ids:
                raise MalformedWord(f"{letter.edge!r} is not a stable letter")
            if letter.exponent not in (1, -1):
                raise MalformedWord("stable letter exponent must be +1 or -1")
        else:
            raise MalformedWord(f"bad letter {letter!r}")


def letter_image(md: ModularData, g: GBSData, letter) -> AffineMap:
    if isinstance(letter, VertexGen):
        return AffineMap(ratlin.identity(g.n),
                         ratlin.normalize_vec(ratlin.mat_vec(md.tau[letter.vertex], letter.z)))
    m = md.mu_stable[letter.edge]
    if letter.exponent < 0:
        m = ratlin.mat_inv(m)
    return AffineMap(m, ratlin.zero_vector(g.n))


def mu_eval(md: ModularData, g: GBSData, w: Word) -> AffineMap:
    check_word(g, w)
    result = AffineMap.identity(g.n)
    for letter in w:
        result = result @ letter_image(md, g, letter)
    return result


def fmt_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_matrix(m: Matrix) -> str:
    return "[" + ", ".join("[" + ", ".join(fmt_rational(x) for x in r) + "]" for r in m) + "]"
