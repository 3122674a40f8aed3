"""Verdicts: amenability of G and of the closure of mu(H_d), Haagerup and weak
amenability, exponential distortion, compression exponents, structure.

Every verdict is three-valued.  Positive and negative answers name the rule
that produced them or carry a certificate that can be replayed exactly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath

from . import ratlin
from .bstree import PingPongCertificate, ping_pong_search
from .gog import GBSData, rank_d, reduce_graph
from .modmap import ModularData, compute_modular, fmt_matrix
from .ratlin import Matrix
from .words import ResourceLimit, normal_form, parse_word

AMENABLE, NON_AMENABLE, UNKNOWN = "amenable", "non-amenable", "unknown"
YES, NO = "yes", "no"
DEFAULT_DEPTH = 6


# ---------------------------------------------------------------------------
# amenability of G
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AmenabilityVerdict:
    status: str
    reason: Optional[str] = None          # SingleVertexNoEdges | AscendingHNN | IndexTwoAmalgam
    certificate: Optional[PingPongCertificate] = None
    depth_reached: Optional[int] = None

    def as_dict(self) -> dict:
        return {"status": self.status, "reason": self.reason,
                "certificate": self.certificate.as_dict() if self.certificate else None,
                "depth_reached": self.depth_reached}


def structural_case(g: GBSData) -> Optional[str]:
    r = reduce_graph(g)
    if not r.edge_ids:
        return "SingleVertexNoEdges"
    if len(r.vertices) == 1 and len(r.edge_ids) == 1:
        e = r.a_edge(r.edge_ids[0])
        if r.index(e) == 1 or r.index((e[0], -e[1])) == 1:
            return "AscendingHNN"
    if len(r.vertices) == 2 and len(r.edge_ids) == 1 and r.edge_ids[0] in r.tree:
        eid = r.edge_ids[0]
        if r.index((eid, 1)) == 2 and r.index((eid, -1)) == 2:
            return "IndexTwoAmalgam"
    return None


def decide_amenable(g: GBSData, depth: int = DEFAULT_DEPTH) -> AmenabilityVerdict:
    case = structural_case(g)
    if case is not None:
        return AmenabilityVerdict(AMENABLE, reason=case)
    try:
        cert = ping_pong_search(g, depth)
    except ResourceLimit:
        return AmenabilityVerdict(UNKNOWN, depth_reached=depth)
    if cert is not None:
        return AmenabilityVerdict(NON_AMENABLE, certificate=cert, depth_reached=depth)
    return AmenabilityVerdict(UNKNOWN, depth_reached=depth)


# ---------------------------------------------------------------------------
# amenability of the closure of mu(H_d)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SchottkyCertificate:
    """Projective ping-pong for a^k, b^k on the slope line of R^2.

    Slopes are taken after conjugating by ``conjugator``; ``arcs`` lists the
    closed intervals (attracting a, repelling a, attracting b, repelling b).
    """
    words: Tuple[Tuple[Tuple[int, int], ...], Tuple[Tuple[int, int], ...]]
    power: int
    conjugator: Matrix
    arcs: Tuple[Tuple[Fraction, Fraction], ...]

    def as_dict(self) -> dict:
        return {"words": [[list(x) for x in w] for w in self.words], "power": self.power,
                "conjugator": fmt_matrix(self.conjugator),
                "arcs": [[str(lo), str(hi)] for lo, hi in self.arcs]}


@dataclass(frozen=True)
class ClosureVerdict:
    status: str
    case: Optional[str] = None   # DZero | DOne | NOne | InvariantForm | Triangularizable
    certificate: object = None   # invariant form, or SchottkyCertificate
    note: str = ""

    def as_dict(self) -> dict:
        cert = self.certificate
        if isinstance(cert, SchottkyCertificate):
            cert = cert.as_dict()
        elif cert is not None:
            cert = fmt_matrix(cert)
        return {"status": self.status, "case": self.case, "certificate": cert, "note": self.note}


def invariant_form(mats: Sequence[Matrix]) -> Optional[Matrix]:
    """A rational positive-definite Q with g^T Q g = Q for all g, if the
    deterministic candidate (sum of a nullspace basis) is positive definite."""
    n = len(mats[0])
    idx = [(i, j) for i in range(n) for j in range(i, n)]

    def sym(vec):
        q = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), c in zip(idx, vec):
            q[i][j] = q[j][i] = c
        return tuple(tuple(r) for r in q)

    rows = []
    for m in mats:
        cols = []
        for k in range(len(idx)):
            unit = [0] * len(idx)
            unit[k] = 1
            q = sym(unit)
            cols.append(ratlin.mat_sub(ratlin.mat_mul(ratlin.mat_mul(ratlin.transpose(m), q), m), q))
        for i in range(n):
            for j in range(i, n):
                rows.append([c[i][j] for c in cols])
    basis = ratlin.nullspace(rows, len(idx))
    if not basis:
        return None
    cand = [sum(b[k] for b in basis) for k in range(len(idx))]
    q = ratlin.normalize(sym(cand))
    if ratlin.is_positive_definite(q):
        return q
    neg = ratlin.normalize(ratlin.mat_scale(-1, q))
    return neg if ratlin.is_positive_definite(neg) else None


def _span_basis(mats: List[Matrix]) -> List[Matrix]:
    n = len(mats[0]) if mats else 0
    rows = [[x for r in m for x in r] for m in mats]
    if not rows:
        return []
    reduced, pivots = ratlin.rref(rows)
    out = []
    for r in reduced[:len(pivots)]:
        out.append(tuple(tuple(r[i * n:(i + 1) * n]) for i in range(n)))
    return out


def _closure_under(gens: Sequence[Matrix], start: List[Matrix]) -> List[Matrix]:
    """Basis of the smallest space containing ``start`` and closed under left
    multiplication by every generator."""
    basis = _span_basis(start)
    while True:
        new = _span_basis(basis + [ratlin.mat_mul(a, b) for a in gens for b in basis])
        if len(new) == len(basis):
            return basis
        basis = new


def is_triangularizable(mats: Sequence[Matrix]) -> bool:
    """Simultaneous triangularizability over C, decided exactly.

    The matrices are simultaneously triangularizable iff the two-sided ideal
    J of the algebra they generate, spanned by x [A_i, A_j] y, consists of
    nilpotent matrices.  J is an algebra, so this holds iff every element of
    J has trace zero (char 0), which is a finite check on a basis.
    """
    n = len(mats[0])
    algebra = _closure_under(mats, [ratlin.identity(n)])
    comms = [ratlin.mat_sub(ratlin.mat_mul(a, b), ratlin.mat_mul(b, a))
             for a, b in itertools.combinations(mats, 2)]
    comms = [c for c in comms if any(any(r) for r in c)]
    if not comms:
        return True
    right = [ratlin.mat_mul(c, y) for c in comms for y in algebra]
    ideal = _closure_under(mats, right)
    return all(ratlin.mat_trace(m) == 0 for m in ideal)


# -- projective Schottky search (n = 2) ----------------------------------------

_CONJUGATORS = (((1, 0), (0, 1)), ((1, 1), (-1, 1)), ((2, 1), (-1, 3)))


def _mobius(m: Matrix, s: Fraction) -> Optional[Fraction]:
    (a, b), (c, d) = m
    den = c * s + d
    if den == 0:
        return None
    return Fraction(a * s + b) / den


def _maps_outside_into(m: Matrix, avoid: Tuple[Fraction, Fraction],
                       target: Tuple[Fraction, Fraction]) -> bool:
    """m sends the closed complement of the open interval ``avoid`` (an arc
    through infinity) into the open interval ``target``."""
    (a, b), (c, d) = m
    lo, hi = avoid
    if c == 0:
        return False
    pole = Fraction(-d) / c
    if not lo < pole < hi:
        return False
    pts = [_mobius(m, hi), _mobius(m, lo), Fraction(a) / c]
    return all(target[0] < p < target[1] for p in pts)


def _check_schottky(ma: Matrix, mb: Matrix, arcs) -> bool:
    ua, va, ub, vb = arcs
    if any(lo >= hi for lo, hi in arcs):
        return False
    ordered = sorted(arcs)
    if any(ordered[i][1] >= ordered[i + 1][0] for i in range(3)):
        return False
    ia, ib = ratlin.mat_inv(ma), ratlin.mat_inv(mb)
    return (_maps_outside_into(ma, va, ua) and _maps_outside_into(ia, ua, va)
            and _maps_outside_into(mb, vb, ub) and _maps_outside_into(ib, ub, vb))


def _fixed_slopes(m: Matrix) -> Optional[Tuple[float, float]]:
    """(attracting, repelling) slopes of a matrix with real eigenvalues of
    distinct moduli, numerically."""
    (a, b), (c, d) = m
    tr, dt = a + d, a * d - b * c
    disc = tr * tr - 4 * dt
    if disc <= 0 or tr == 0:
        return None
    r = mpmath.sqrt(mpmath.mpf(disc))
    lam = [(tr + r) / 2, (tr - r) / 2]
    lam.sort(key=lambda x: -abs(x))
    out = []
    for l in lam:
        # eigenvector (b, l - a) or (l - d, c)
        if b != 0:
            x, y = mpmath.mpf(b), l - a
        else:
            x, y = l - d, mpmath.mpf(c)
        if abs(y) < mpmath.mpf(10) ** -30:
            return None
        out.append(float(x / y))
    return out[0], out[1]


def _to_rat(x: float) -> Fraction:
    return Fraction(x).limit_denominator(10 ** 9)


def schottky_pair(ma: Matrix, mb: Matrix, max_power: int = 64):
    """Try to certify <a^k, b^k> Schottky for some k <= max_power."""
    for conj in _CONJUGATORS:
        cinv = ratlin.mat_inv(conj)
        a = ratlin.normalize(ratlin.mat_mul(ratlin.mat_mul(conj, ma), cinv))
        b = ratlin.normalize(ratlin.mat_mul(ratlin.mat_mul(conj, mb), cinv))
        fa, fb = _fixed_slopes(a), _fixed_slopes(b)
        if fa is None or fb is None:
            continue
        pts = [fa[0], fa[1], fb[0], fb[1]]
        if max(abs(p) for p in pts) > 1e6:
            continue
        gap = min(abs(p - q) for p, q in itertools.combinations(pts, 2))
        if gap < 1e-9:
            continue
        eps = gap / 4
        arcs = tuple((_to_rat(p - eps), _to_rat(p + eps)) for p in pts)
        k = 1
        while k <= max_power:
            ak, bk = ratlin.mat_pow(a, k), ratlin.mat_pow(b, k)
            if _check_schottky(ak, bk, arcs):
                return k, conj, arcs
            k *= 2
    return None


def verify_schottky(md: ModularData, cert: SchottkyCertificate) -> bool:
    ma = _free_word_matrix(md, cert.words[0])
    mb = _free_word_matrix(md, cert.words[1])
    cinv = ratlin.mat_inv(cert.conjugator)
    a = ratlin.mat_mul(ratlin.mat_mul(cert.conjugator, ma), cinv)
    b = ratlin.mat_mul(ratlin.mat_mul(cert.conjugator, mb), cinv)
    return _check_schottky(ratlin.mat_pow(a, cert.power), ratlin.mat_pow(b, cert.power), cert.arcs)


def _generator_matrices(md: ModularData, g: GBSData) -> List[Matrix]:
    return [md.mu_stable[e] for e in g.stable_ids]


def _free_word_matrix(md: ModularData, word, ids: Optional[Sequence[str]] = None) -> Matrix:
    ids = ids if ids is not None else list(md.mu_stable)
    m = ratlin.identity(len(next(iter(md.mu_stable.values()))))
    for i, s in word:
        x = md.mu_stable[ids[i]]
        m = ratlin.mat_mul(m, x if s > 0 else ratlin.mat_inv(x))
    return ratlin.normalize(m)


def _free_words(d: int, depth: int):
    """Freely reduced words over d letters, shortlex order."""
    layer = [()]
    for _ in range(depth):
        nxt = []
        for w in layer:
            for i in range(d):
                for s in (1, -1):
                    if w and w[-1] == (i, -s):
                        continue
                    nxt.append(w + ((i, s),))
        yield from nxt
        layer = nxt


def schottky_search(md: ModularData, g: GBSData, depth: int = DEFAULT_DEPTH,
                    max_candidates: int = 120) -> Optional[SchottkyCertificate]:
    ids = list(md.mu_stable)
    hyper = []
    for w in _free_words(len(ids), depth):
        m = _free_word_matrix(md, w, ids)
        if _fixed_slopes(m) is None:
            continue
        for w0, m0 in hyper:
            found = schottky_pair(m0, m)
            if found:
                k, conj, arcs = found
                return SchottkyCertificate((w0, w), k, conj, arcs)
        hyper.append((w, m))
        if len(hyper) >= max_candidates:
            break
    return None


def closure_amenability(md: ModularData, g: GBSData, depth: int = DEFAULT_DEPTH) -> ClosureVerdict:
    d = rank_d(g)
    if d == 0:
        return ClosureVerdict(AMENABLE, "DZero")
    if d == 1:
        return ClosureVerdict(AMENABLE, "DOne")
    if g.n == 1:
        return ClosureVerdict(AMENABLE, "NOne")
    mats = _generator_matrices(md, g)
    q = invariant_form(mats)
    if q is not None:
        return ClosureVerdict(AMENABLE, "InvariantForm", q)
    if is_triangularizable(mats):
        return ClosureVerdict(AMENABLE, "Triangularizable")
    if g.n == 2:
        cert = schottky_search(md, g, depth)
        if cert is not None:
            return ClosureVerdict(NON_AMENABLE, certificate=cert)
        return ClosureVerdict(UNKNOWN, note=f"no Schottky pair among products up to length {depth}")
    return ClosureVerdict(UNKNOWN, note=f"no rule applies for n = {g.n}")


# ---------------------------------------------------------------------------
# Haagerup property and weak amenability
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HaagerupReport:
    haagerup: str
    weakly_amenable: str
    lam: Optional[int] = None
    closure: Optional[ClosureVerdict] = None

    def as_dict(self) -> dict:
        return {"haagerup": self.haagerup, "weakly_amenable": self.weakly_amenable, "lambda": self.lam}


def haagerup_report(g: GBSData, depth: int = DEFAULT_DEPTH,
                    md: Optional[ModularData] = None) -> HaagerupReport:
    md = md or compute_modular(g)
    cv = closure_amenability(md, g, depth)
    if cv.status == AMENABLE:
        return HaagerupReport(YES, YES, 1, cv)
    if cv.status == NON_AMENABLE:
        return HaagerupReport(NO, NO, None, cv)
    return HaagerupReport(UNKNOWN, UNKNOWN, None, cv)


# ---------------------------------------------------------------------------
# exponential distortion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistortionReport:
    distal_dual_part: Optional[Tuple[tuple, ...]]   # basis (rows); None if not rational
    distal_dimension: int
    exp_distorted: str
    certified: bool
    exp_subspace_note: str = ""

    def as_dict(self) -> dict:
        basis = None if self.distal_dual_part is None else \
            [[str(x) for x in v] for v in self.distal_dual_part]
        return {"distal_dual_part": basis, "distal_dimension": self.distal_dimension,
                "exp_distorted": self.exp_distorted, "certified": self.certified,
                "note": self.exp_subspace_note}


def modulus_one_subspace(m: Matrix, precision_cap: int = ratlin.DEFAULT_PRECISION_CAP
                         ) -> Tuple[Optional[List[tuple]], ratlin.RootModuli]:
    """Basis of the sum of generalized eigenspaces of m for eigenvalues of
    modulus one (None when that subspace is not defined over Q)."""
    n = len(m)
    p = ratlin.char_poly(m)
    rm = ratlin.classify_root_moduli(p, precision_cap)
    if rm.count_eq1 == 0:
        return [], rm
    if rm.count_eq1 == n:
        return [tuple(r) for r in ratlin.identity(n)], rm
    u = ratlin.unit_circle_factor(p)
    if u is None:
        return None, rm
    k = ratlin.mat_pow(ratlin.poly_of_matrix(u, m), n)
    return [tuple(v) for v in ratlin.nullspace(k, n)], rm


def _intersect(a: List[tuple], b: List[tuple], n: int) -> List[tuple]:
    """Intersection of two subspaces given by row bases."""
    if not a or not b:
        return []
    # x = sum alpha_i a_i = sum beta_j b_j
    rows = [[a[i][k] for i in range(len(a))] + [-b[j][k] for j in range(len(b))] for k in range(n)]
    null = ratlin.nullspace(rows, len(a) + len(b))
    vecs = [tuple(sum(c[i] * a[i][k] for i in range(len(a))) for k in range(n)) for c in null]
    reduced, piv = ratlin.rref(vecs) if vecs else ([], [])
    return [tuple(r) for r in reduced[:len(piv)]]


def distortion_report(md: ModularData, g: GBSData, depth: int = 3,
                      precision_cap: int = ratlin.DEFAULT_PRECISION_CAP) -> DistortionReport:
    n = g.n
    mats = _generator_matrices(md, g)
    full = [tuple(r) for r in ratlin.identity(n)]
    if not mats:
        return DistortionReport(tuple(full), n, NO, True, "trivial action: the dual is distal")
    if len(mats) == 1:
        try:
            basis, rm = modulus_one_subspace(ratlin.transpose(mats[0]), precision_cap)
        except ratlin.PrecisionExhausted:
            return DistortionReport(None, 0, UNKNOWN, False, "root moduli not certified")
        if not rm.certified:
            return DistortionReport(None, 0, UNKNOWN, False, "root moduli not certified")
        dim = rm.count_eq1
        rows = None if basis is None else tuple(basis)
        if dim == 0:
            return DistortionReport((), 0, YES, True, "no eigenvalue of modulus one")
        if dim == n:
            return DistortionReport(rows, n, NO, True, "all eigenvalues have modulus one")
        return DistortionReport(rows, dim, UNKNOWN, True,
                                f"distal part has dimension {dim} of {n}: Z^n is partially distorted")
    # several generators: intersect modulus-one parts over bounded products
    ids = list(md.mu_stable)
    current = full
    exact = True
    for w in _free_words(len(ids), depth):
        m = ratlin.transpose(_free_word_matrix(md, w, ids))
        basis, rm = modulus_one_subspace(m, precision_cap)
        if not rm.certified or basis is None:
            exact = False
            continue
        current = _intersect(current, basis, n)
        if not current:
            return DistortionReport((), 0, YES, True,
                                    f"products up to length {depth} leave no common distal part")
    if len(current) == n and exact:
        q = invariant_form(mats)
        unit = all(ratlin.classify_root_moduli(ratlin.char_poly(m)).count_eq1 == n for m in mats)
        if q is not None or (unit and is_triangularizable(mats)):
            return DistortionReport(tuple(full), n, NO, True,
                                    "generators preserve a form or are triangular with unit moduli")
    return DistortionReport(tuple(current), len(current), UNKNOWN, False,
                            f"bounded test over products up to length {depth}; uncertified")


def distortion_witness(g: GBSData, k: int, stable: str = "t", vertex_gen: str = "b") -> bool:
    """Check t^k b t^-k == b^(2^k) style identities for bs(1, m): the word
    t^k b t^-k has length 2k+1 and equals b^(m^k)."""
    m = g.sigma[g.a_edge(g.stable_ids[0])][0][0]
    q = g.sigma[(g.stable_ids[0], -g.orientation[g.stable_ids[0]])][0][0]
    if m != 1:
        raise ValueError("witness implemented for bs(1, m)")
    lhs = parse_word(g, " * ".join([stable] * k + [vertex_gen] + [stable + "^-1"] * k))
    rhs = parse_word(g, f"{vertex_gen}^{q ** k}")
    return normal_form(g, lhs) == normal_form(g, rhs)


# ---------------------------------------------------------------------------
# compression exponents
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompressionReport:
    applicable: bool
    p: Fraction
    alpha_p: Optional[Fraction]
    alpha_p_sharp: object           # Fraction, or a tuple of alternatives when unresolved
    assumptions: Tuple[str, ...] = ()

    def as_dict(self) -> dict:
        sharp = self.alpha_p_sharp
        if isinstance(sharp, tuple):
            sharp = [str(x) for x in sharp]
        elif sharp is not None:
            sharp = str(sharp)
        return {"applicable": self.applicable, "p": str(self.p),
                "alpha_p": None if self.alpha_p is None else str(self.alpha_p),
                "alpha_p_sharp": sharp, "assumptions": list(self.assumptions)}


def sharp_nonamenable(p) -> Fraction:
    p = Fraction(p)
    return max(1 / p, Fraction(1, 2))


def compression_report(g: GBSData, p=2, depth: int = DEFAULT_DEPTH,
                       amen: Optional[AmenabilityVerdict] = None) -> CompressionReport:
    p = Fraction(p)
    if p < 1:
        raise ValueError("p must be at least 1")
    d = rank_d(g)
    cases = []
    if d == 0:
        cases.append("d=0")
    if d == 1:
        cases.append("d=1")
    if g.n == 1:
        cases.append("n=1")
    if not cases:
        return CompressionReport(False, p, None, None, ("needs d=0, d=1 or n=1",))
    amen = amen or decide_amenable(g, depth)
    assumptions = tuple(cases) + (f"G {amen.status}",)
    if amen.status == AMENABLE:
        return CompressionReport(True, p, Fraction(1), Fraction(1), assumptions)
    if amen.status == NON_AMENABLE:
        return CompressionReport(True, p, Fraction(1), sharp_nonamenable(p), assumptions)
    return CompressionReport(True, p, Fraction(1), (Fraction(1), sharp_nonamenable(p)), assumptions)


# ---------------------------------------------------------------------------
# structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructureReport:
    ker_mu_free: bool
    free_by_amenable: str
    reason: str

    def as_dict(self) -> dict:
        return {"ker_mu_free": self.ker_mu_free, "free_by_amenable": self.free_by_amenable,
                "reason": self.reason}


def structure_report(md: ModularData, g: GBSData, depth: int = DEFAULT_DEPTH,
                     closure: Optional[ClosureVerdict] = None) -> StructureReport:
    d = rank_d(g)
    if d == 0:
        return StructureReport(True, YES, "mu(H_0) is trivial")
    if d == 1:
        return StructureReport(True, YES, "mu(H_1) is cyclic")
    if g.n == 1:
        return StructureReport(True, YES, "mu(H_d) is abelian (n = 1)")
    mats = _generator_matrices(md, g)
    if is_triangularizable(mats):
        return StructureReport(True, YES, "mu(H_d) is triangularizable, hence solvable")
    closure = closure or closure_amenability(md, g, depth)
    if closure.status == NON_AMENABLE:
        return StructureReport(True, NO, "Schottky pair: mu(H_d) is not virtually solvable")
    if closure.case == "InvariantForm":
        return StructureReport(True, UNKNOWN, "compact closure; virtual solvability not decided")
    return StructureReport(True, UNKNOWN, "no certificate")


def analyze(g: GBSData, depth: int = DEFAULT_DEPTH, p=2,
            precision_cap: int = ratlin.DEFAULT_PRECISION_CAP) -> dict:
    """All reports as plain data."""
    md = compute_modular(g)
    amen = decide_amenable(g, depth)
    hg = haagerup_report(g, depth, md)
    return {"amenable": amen, "closure": hg.closure, "haagerup": hg,
            "distortion": distortion_report(md, g, precision_cap=precision_cap),
            "compression": compression_report(g, p, depth, amen),
            "structure": structure_report(md, g, depth, hg.closure)}
