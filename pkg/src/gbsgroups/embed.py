"""Coarse embeddings of G into products of simple metric spaces, distance
oracles for the targets, properness profiles and compression estimates.

Three maps are provided:

* ``generic``: w -> (w.v0 in the Bass-Serre tree, translation part of mu(w),
  phi(w) in the free group on the stable letters);
* ``n1``: n = 1, w -> (tree, phi(w), mu(w).i in the upper half plane);
* ``d1``: d = 1 and mu(t) without eigenvalues of modulus one, w -> (tree,
  two horospherical coordinates built from the expanding and contracting
  parts of mu(t)).

Component distances are combined in the l^p sense.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from . import ratlin
from .bstree import BASE, act, distance as tree_distance
from .gog import GBSData, rank_d
from .modmap import ModularData, Word, compute_modular, mu_eval
from .words import Ball, NormalForm, ball, free_distance, nf_to_word, phi

CASES = ("generic", "n1", "d1")


class NotApplicable(ValueError):
    pass


class DomainError(ValueError):
    pass


def hyperbolic_distance(z: complex, w: complex) -> float:
    """Distance in the upper half plane."""
    if z.imag <= 0 or w.imag <= 0:
        raise DomainError("points must lie in the upper half plane")
    return 2.0 * math.asinh(abs(z - w) / (2.0 * math.sqrt(z.imag * w.imag)))


@dataclass
class Horospherical:
    """Quasi-distance on V x| R for an expanding matrix ``a`` on V."""
    a: np.ndarray

    def _power(self, k: int) -> np.ndarray:
        return np.linalg.matrix_power(self.a if k >= 0 else np.linalg.inv(self.a), abs(k))

    def distance(self, x: Tuple[np.ndarray, int], y: Tuple[np.ndarray, int]) -> float:
        (v, s), (v2, s2) = x, y
        if self.a.shape[0] == 0:
            return float(abs(s - s2))
        h = min(s, s2)
        diff = self._power(-h) @ (v - v2)
        return abs(s - s2) + math.log1p(float(np.linalg.norm(diff)))


@dataclass
class EmbeddingMap:
    case: str
    g: GBSData
    md: ModularData
    p: float = 2.0
    # d1 case: orthonormal bases of the expanding / contracting subspaces
    basis_plus: Optional[np.ndarray] = None
    basis_minus: Optional[np.ndarray] = None
    horo_plus: Optional[Horospherical] = None
    horo_minus: Optional[Horospherical] = None


def _invariant_basis(a: np.ndarray, sort: str) -> np.ndarray:
    t, z, sdim = scipy.linalg.schur(a, output="real", sort=sort)
    return z[:, :sdim]


def make_map(g: GBSData, case: str = "generic", md: Optional[ModularData] = None,
             p: float = 2.0) -> EmbeddingMap:
    md = md or compute_modular(g)
    if p < 1:
        raise ValueError("p must be at least 1")
    if case == "generic":
        return EmbeddingMap(case, g, md, p)
    if case == "n1":
        if g.n != 1:
            raise NotApplicable("the hyperbolic-plane map needs n = 1")
        return EmbeddingMap(case, g, md, p)
    if case == "d1":
        if rank_d(g) != 1:
            raise NotApplicable("the split map needs d = 1")
        m = md.mu_stable[g.stable_ids[0]]
        rm = ratlin.classify_root_moduli(ratlin.char_poly(m))
        if not rm.certified or rm.count_eq1:
            raise NotApplicable("mu(t) has eigenvalues of modulus one (or moduli not certified)")
        a = np.array([[float(x) for x in r] for r in m])
        qp = _invariant_basis(a, "ouc")
        qm = _invariant_basis(a, "iuc")
        hp = Horospherical(qp.T @ a @ qp)
        # on the contracting part, a^-1 expands
        hm = Horospherical(np.linalg.inv(qm.T @ a @ qm)) if qm.shape[1] else Horospherical(np.zeros((0, 0)))
        return EmbeddingMap(case, g, md, p, qp, qm, hp, hm)
    raise ValueError(f"unknown embedding case {case!r}")


def _as_word(g: GBSData, w) -> Word:
    return nf_to_word(g, w) if isinstance(w, NormalForm) else tuple(w)


def split_translation(emap: EmbeddingMap, b: Sequence) -> Tuple[np.ndarray, np.ndarray]:
    """Coordinates of b in the expanding and contracting subspaces."""
    vec = np.array([float(x) for x in b])
    full = np.hstack([emap.basis_plus, emap.basis_minus])
    coords = np.linalg.solve(full, vec)
    k = emap.basis_plus.shape[1]
    return coords[:k], coords[k:]


def embed_point(emap: EmbeddingMap, w) -> dict:
    g, md = emap.g, emap.md
    w = _as_word(g, w)
    image = mu_eval(md, g, w)
    point = {"tree": act(g, w, BASE)}
    if emap.case == "generic":
        point["translation"] = image.translation
        point["free"] = phi(g, w)
    elif emap.case == "n1":
        a = image.linear[0][0]
        b = image.translation[0]
        point["free"] = phi(g, w)
        point["hyperbolic"] = complex(float(b), abs(float(a)))
    else:
        height = sum(e for _, e in phi(g, w))
        vp, vm = split_translation(emap, image.translation)
        point["plus"] = (vp, height)
        point["minus"] = (vm, -height)
    return point


def component_distances(emap: EmbeddingMap, x: dict, y: dict) -> List[float]:
    out = [float(tree_distance(x["tree"], y["tree"]))]
    if emap.case == "generic":
        diff = [float(Fraction(a) - Fraction(b)) for a, b in zip(x["translation"], y["translation"])]
        out.append(math.sqrt(sum(c * c for c in diff)))
        out.append(float(free_distance(x["free"], y["free"])))
    elif emap.case == "n1":
        out.append(float(free_distance(x["free"], y["free"])))
        out.append(hyperbolic_distance(x["hyperbolic"], y["hyperbolic"]))
    else:
        out.append(emap.horo_plus.distance(x["plus"], y["plus"]))
        out.append(emap.horo_minus.distance(x["minus"], y["minus"]))
    return out


def target_distance(emap: EmbeddingMap, x: dict, y: dict) -> float:
    parts = component_distances(emap, x, y)
    p = emap.p
    return sum(c ** p for c in parts) ** (1.0 / p)


# ---------------------------------------------------------------------------
# properness and compression
# ---------------------------------------------------------------------------

def properness_profile(emap: EmbeddingMap, r_max: int, b: Optional[Ball] = None) -> List[float]:
    """Entry R is the least target distance from the identity over the
    sphere of radius R (entry 0 is 0)."""
    b = b or ball(emap.g, r_max)
    origin = embed_point(emap, ())
    best = [math.inf] * (r_max + 1)
    best[0] = 0.0
    for x, r in b:
        if 0 < r <= r_max:
            d = target_distance(emap, origin, embed_point(emap, x))
            if d < best[r]:
                best[r] = d
    return best


@dataclass
class CompressionEstimate:
    radius: int
    p: float
    seed: int
    n_pairs: int
    profile: List[Tuple[int, float]]          # (r, rho_hat(r))
    exponent: float                           # fitted slope clipped to [0, 1]
    band: Tuple[float, float]                 # slope +- 2 standard errors, clipped
    raw_slope: float
    qi_constants: Optional[Tuple[float, float]] = None   # (multiplicative, additive)

    def as_dict(self) -> dict:
        return {"radius": self.radius, "p": self.p, "seed": self.seed, "n_pairs": self.n_pairs,
                "exponent": self.exponent, "band": list(self.band), "raw_slope": self.raw_slope,
                "profile": [list(x) for x in self.profile],
                "qi_constants": None if self.qi_constants is None else list(self.qi_constants)}


def _sample_pairs(elements: List[NormalForm], rng: random.Random, max_pairs: int):
    k = len(elements)
    total = k * (k - 1) // 2
    if total <= max_pairs:
        for i in range(k):
            for j in range(i + 1, k):
                yield elements[i], elements[j]
        return
    for _ in range(max_pairs):
        i, j = rng.sample(range(k), 2)
        yield elements[i], elements[j]


def estimate_compression(emap: EmbeddingMap, radius: int, seed: int = 0,
                         max_pairs: int = 10 ** 5, b: Optional[Ball] = None) -> CompressionEstimate:
    """Fit log rho_hat(r) against log r, where rho_hat(r) is the least target
    distance over sampled pairs at word distance >= r.  The fit uses
    r >= max(2, R // 4).

    Pairs are all (1, x) with x in the ball of radius R, plus pairs inside the
    ball of radius R/2 (all of them, or a seeded uniform sample), whose word
    distance |x^-1 y| is read off the radius-R ball exactly.
    """
    from .words import nf_inverse, nf_mul

    g = emap.g
    b = b or ball(g, radius)
    rng = random.Random(seed)
    points: Dict[NormalForm, dict] = {}

    def pt(x):
        if x not in points:
            points[x] = embed_point(emap, x)
        return points[x]

    best = [math.inf] * (radius + 1)

    def record(dg: int, dt: float):
        if dt < best[dg]:
            best[dg] = dt

    one = b.elements[0]
    n_pairs = 0
    for x, r in b:
        if r > 0:
            record(r, target_distance(emap, pt(one), pt(x)))
            n_pairs += 1
    inner = [x for x, r in b if r <= radius // 2]
    for x, y in _sample_pairs(inner, rng, max_pairs):
        z = nf_mul(g, nf_inverse(g, x), y)
        dg = b.length[z]
        if dg:
            record(dg, target_distance(emap, pt(x), pt(y)))
            n_pairs += 1
    # rho_hat(r) = min over pairs with word distance >= r
    rho = []
    running = math.inf
    for r in range(radius, 0, -1):
        running = min(running, best[r])
        rho.append((r, running))
    rho.reverse()
    # the smallest scales are dominated by additive constants; fit from r0 on
    r0 = max(2, radius // 4) if radius >= 4 else 1
    fit = [(r, v) for r, v in rho if r >= r0 and 0 < v < math.inf]
    xs = np.array([math.log(r) for r, v in fit])
    ys = np.array([math.log(v) for r, v in fit])
    if len(xs) < 2:
        return CompressionEstimate(radius, emap.p, seed, n_pairs, rho, 0.0, (0.0, 0.0), 0.0)
    slope, intercept = (float(c) for c in np.polyfit(xs, ys, 1))
    resid = ys - (slope * xs + intercept)
    dof = max(1, len(xs) - 2)
    se = math.sqrt(float(resid @ resid) / dof / float(((xs - xs.mean()) ** 2).sum()))
    clip = lambda v: min(1.0, max(0.0, v))
    qi = None
    if slope > 0.9:
        # linear lower bound rho(r) >= r / C - A
        rs = np.array([r for r, v in fit], dtype=float)
        vs = np.array([v for r, v in fit])
        alpha = float(np.polyfit(rs, vs, 1)[0])
        if alpha > 0:
            mult = 1.0 / alpha
            qi = (mult, float(max(0.0, (rs / mult - vs).max())))
    return CompressionEstimate(radius, emap.p, seed, n_pairs, rho, clip(slope),
                               (clip(slope - 2 * se), clip(slope + 2 * se)), slope, qi)
