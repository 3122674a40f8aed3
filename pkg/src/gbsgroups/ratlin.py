"""Exact rational / integer linear algebra and root-modulus classification.

Matrices are tuples of row tuples whose entries are ``int`` or
``fractions.Fraction``; vectors are plain tuples.  Polynomials are tuples
of coefficients, lowest degree first.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import mpmath

Matrix = Tuple[tuple, ...]
Vector = tuple
Poly = Tuple[Fraction, ...]

DEFAULT_PRECISION_CAP = 1024


class SingularMatrix(ValueError):
    pass


class PrecisionExhausted(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# basic matrix helpers
# ---------------------------------------------------------------------------

def as_matrix(rows) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zero_vector(n: int) -> Vector:
    return (0,) * n


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a: Matrix, v: Sequence) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vec_add(u: Sequence, v: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def vec_neg(u: Sequence) -> Vector:
    return tuple(-x for x in u)


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_scale(c, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in r) for r in a)


def normalize(m: Matrix) -> Matrix:
    """Turn integral Fractions back into ints so equal matrices compare and hash equal."""
    return tuple(tuple(_norm_scalar(x) for x in r) for r in m)


def normalize_vec(v: Sequence) -> Vector:
    return tuple(_norm_scalar(x) for x in v)


def _norm_scalar(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def is_integer_matrix(m: Matrix) -> bool:
    return all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)
               for r in m for x in r)


def mat_trace(m: Matrix):
    return sum(m[i][i] for i in range(len(m)))


def det(m: Matrix):
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num / prev if isinstance(num, Fraction) or isinstance(prev, Fraction) \
                    else num // prev
        prev = a[k][k]
    return _norm_scalar(sign * a[n - 1][n - 1])


def mat_inv(m: Matrix) -> Matrix:
    """Exact inverse over Q (Gauss-Jordan)."""
    n = len(m)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(m)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return normalize(tuple(tuple(r[n:]) for r in a))


def mat_pow(m: Matrix, k: int) -> Matrix:
    if k < 0:
        return mat_pow(mat_inv(m), -k)
    result = identity(len(m))
    base = m
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return normalize(result)


def adjugate(m: Matrix) -> Matrix:
    n = len(m)
    if n == 1:
        return ((1,),)
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(tuple(m[r][c] for c in range(n) if c != j) for r in range(n) if r != i)
            cof[i][j] = (-1) ** (i + j) * det(minor)
    return transpose(tuple(tuple(r) for r in cof))


def rref(rows: Sequence[Sequence]) -> Tuple[list, list]:
    """Reduced row echelon form over Q.  Returns (rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: Optional[int] = None) -> list:
    """Basis of {x : rows @ x = 0} over Q, as a list of Fraction tuples."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def is_positive_definite(q: Matrix) -> bool:
    """Sylvester's criterion on exact leading principal minors."""
    n = len(q)
    return all(det(tuple(tuple(q[i][j] for j in range(k)) for i in range(k))) > 0
               for k in range(1, n + 1))


# ---------------------------------------------------------------------------
# Hermite normal form and lattice cosets
# ---------------------------------------------------------------------------

def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_normal_form(m: Matrix) -> Tuple[Matrix, Matrix]:
    """Row-style lower-triangular Hermite normal form.

    Returns ``(H, U)`` with ``H == U @ M``, ``U`` unimodular, ``H`` lower
    triangular, nonnegative diagonal and off-diagonal entries of row ``i``
    reduced into ``[0, H[j][j])`` whenever ``H[j][j] > 0``.
    """
    n = len(m)
    h = [[int(x) for x in r] for r in m]
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for col in range(n - 1, -1, -1):
        # gather the gcd of column `col` over rows 0..col into row `col`
        for i in range(col):
            a, b = h[col][col], h[i][col]
            if b == 0:
                continue
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            rc, ri = h[col], h[i]
            h[col] = [x * s + y * t for s, t in zip(rc, ri)]
            h[i] = [-q * s + p * t for s, t in zip(rc, ri)]
            uc, ui = u[col], u[i]
            u[col] = [x * s + y * t for s, t in zip(uc, ui)]
            u[i] = [-q * s + p * t for s, t in zip(uc, ui)]
        if h[col][col] < 0:
            h[col] = [-s for s in h[col]]
            u[col] = [-s for s in u[col]]
    # reduce below-diagonal entries, top row first so pivots are final
    for i in range(n):
        for j in range(i):
            d = h[j][j]
            if d > 0:
                q = h[i][j] // d
                if q:
                    h[i] = [s - q * t for s, t in zip(h[i], h[j])]
                    u[i] = [s - q * t for s, t in zip(u[i], u[j])]
    return as_matrix(h), as_matrix(u)


@dataclass(frozen=True)
class LatticeSplitter:
    """Division with remainder modulo the column lattice ``M Z^n``.

    ``basis`` is an upper-triangular integer matrix whose columns generate
    ``M Z^n`` and ``coeffs`` maps basis coordinates back to M-coordinates,
    i.e. ``basis == M @ coeffs``.
    """
    matrix: Matrix
    basis: Matrix
    coeffs: Matrix

    @property
    def box(self) -> Tuple[int, ...]:
        return tuple(self.basis[i][i] for i in range(len(self.basis)))

    def split(self, v: Sequence[int]) -> Tuple[Vector, Vector]:
        """Return ``(r, y)`` with ``v == r + basis @ y`` and ``r`` in the HNF box."""
        n = len(v)
        r = list(v)
        y = [0] * n
        b = self.basis
        for i in range(n - 1, -1, -1):
            q = r[i] // b[i][i]
            if q:
                y[i] = q
                for k in range(i + 1):
                    r[k] -= q * b[k][i]
        return tuple(r), tuple(y)

    def residue(self, v: Sequence[int]) -> Vector:
        return self.split(v)[0]


@lru_cache(maxsize=None)
def lattice_splitter(m: Matrix) -> LatticeSplitter:
    m = normalize(m)
    if det(m) == 0:
        raise SingularMatrix(f"singular matrix {m}")
    h, u = hermite_normal_form(transpose(m))
    return LatticeSplitter(m, transpose(h), transpose(u))


@lru_cache(maxsize=None)
def coset_reps(m: Matrix) -> Tuple[Vector, ...]:
    """Canonical representatives of Z^n / M Z^n in lexicographic box order."""
    box = lattice_splitter(m).box
    return tuple(itertools.product(*(range(d) for d in box)))


def canonical_rep(m: Matrix, v: Sequence[int]) -> Vector:
    return lattice_splitter(m).residue(v)


def solve_membership(m: Matrix, v: Sequence[int]) -> Optional[Vector]:
    """Integral ``x`` with ``M x == v``, or ``None`` when ``v`` is not in ``M Z^n``."""
    m = normalize(m)
    d = det(m)
    if d == 0:
        raise SingularMatrix(f"singular matrix {m}")
    num = mat_vec(adjugate(m), v)
    if any(x % d for x in num):
        return None
    return tuple(x // d for x in num)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

def poly_strip(p: Sequence) -> Poly:
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_degree(p: Poly) -> int:
    return len(p) - 1


def poly_monic(p: Poly) -> Poly:
    p = poly_strip(p)
    lc = p[-1]
    return tuple(c / lc for c in p)


def poly_mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly_strip(out)


def poly_divmod(p: Poly, q: Poly) -> Tuple[Poly, Poly]:
    p = list(poly_strip(p))
    q = poly_strip(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    dq = len(q) - 1
    quot = [Fraction(0)] * max(len(p) - dq, 1)
    while len(p) - 1 >= dq and p:
        c = p[-1] / q[-1]
        k = len(p) - 1 - dq
        quot[k] = c
        for i, b in enumerate(q):
            p[i + k] -= c * b
        p = list(poly_strip(p))
    return poly_strip(quot), tuple(p)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    p, q = poly_strip(p), poly_strip(q)
    while q:
        p, q = q, poly_divmod(p, q)[1]
    return poly_monic(p) if p else ()


def poly_deriv(p: Poly) -> Poly:
    return poly_strip([i * c for i, c in enumerate(p)][1:])


def poly_eval(p: Poly, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_reverse(p: Poly) -> Poly:
    return poly_strip(tuple(reversed(poly_strip(p))))


def char_poly(a: Matrix) -> Poly:
    """Characteristic polynomial det(xI - A), monic, via division-free Berkowitz."""
    n = len(a)
    a = [[Fraction(x) for x in r] for r in a]
    # Berkowitz: coefficient vectors highest degree first
    c = [Fraction(1), -a[0][0]] if n else [Fraction(1)]
    for r in range(1, n):
        # A = [[M, C], [R, a_rr]] for the leading (r+1)x(r+1) block
        col = [a[i][r] for i in range(r)]
        row = [a[r][j] for j in range(r)]
        m = [ar[:r] for ar in a[:r]]
        toeplitz_col = [Fraction(1), -a[r][r]]
        v = col
        for _ in range(r):
            toeplitz_col.append(-sum(x * y for x, y in zip(row, v)))
            v = [sum(m[i][j] * v[j] for j in range(r)) for i in range(r)]
        new = []
        for i in range(r + 2):
            s = Fraction(0)
            for j in range(min(i, r) + 1):
                k = i - j
                if k < len(toeplitz_col) and j < len(c):
                    s += toeplitz_col[k] * c[j]
            new.append(s)
        c = new
    return tuple(reversed(c))


def poly_str(p: Poly) -> str:
    terms = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == 0:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if mono and abs(c) == 1:
            coef = "-" if c < 0 else "+"
            terms.append(f"{coef}{mono}")
        else:
            terms.append(f"{'+' if c > 0 else '-'}{abs(c)}{mono}")
    s = " ".join(terms) or "0"
    return s.lstrip("+")



def sturm_count(p: Poly, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of a squarefree ``p`` in the open interval (lo, hi)."""
    p = poly_strip(p)
    seq = [p, poly_deriv(p)]
    while seq[-1] and poly_degree(seq[-1]) > 0:
        r = poly_divmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append(tuple(-c for c in r))

    def variations(x):
        signs = [v for v in (poly_eval(s, x) for s in seq if s) if v != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))

    return variations(lo) - variations(hi)


def squarefree_decomposition(p: Poly) -> list:
    """Yun's algorithm: list of (factor, multiplicity) with monic squarefree factors."""
    p = poly_monic(p)
    out = []
    if poly_degree(p) <= 0:
        return out
    a = poly_gcd(p, poly_deriv(p))
    b = poly_divmod(p, a)[0]
    c = poly_divmod(poly_deriv(p), a)[0]
    d = tuple(x - y for x, y in itertools.zip_longest(c, poly_deriv(b), fillvalue=Fraction(0)))
    d = poly_strip(d)
    i = 1
    while poly_degree(b) > 0:
        a = poly_gcd(b, d)
        if poly_degree(a) > 0:
            out.append((poly_monic(a), i))
        b = poly_divmod(b, a)[0]
        c = poly_divmod(d, a)[0]
        d = poly_strip(tuple(x - y for x, y in
                             itertools.zip_longest(c, poly_deriv(b), fillvalue=Fraction(0))))
        i += 1
    return out


# ---------------------------------------------------------------------------
# root moduli
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootModuli:
    count_lt1: int
    count_eq1: int
    count_gt1: int
    certified: bool = True
    precision_exhausted: bool = False

    def __add__(self, other: "RootModuli") -> "RootModuli":
        return RootModuli(self.count_lt1 + other.count_lt1,
                          self.count_eq1 + other.count_eq1,
                          self.count_gt1 + other.count_gt1,
                          self.certified and other.certified,
                          self.precision_exhausted or other.precision_exhausted)

    def scaled(self, k: int) -> "RootModuli":
        return RootModuli(k * self.count_lt1, k * self.count_eq1, k * self.count_gt1,
                          self.certified, self.precision_exhausted)

    @property
    def counts(self) -> Tuple[int, int, int]:
        return (self.count_lt1, self.count_eq1, self.count_gt1)


def palindromic_to_trace_poly(g: Poly) -> Poly:
    """For palindromic ``g`` of degree 2k return ``h`` with g(x) = x^k h(x + 1/x)."""
    deg = poly_degree(g)
    k = deg // 2
    # P_j(y) = x^j + x^-j expressed in y = x + 1/x
    pj = [(Fraction(2),), (Fraction(0), Fraction(1))]
    for _ in range(2, k + 1):
        nxt = poly_strip(tuple(a - b for a, b in itertools.zip_longest(
            (Fraction(0),) + pj[-1], pj[-2], fillvalue=Fraction(0))))
        pj.append(nxt)
    h = [g[k]]
    for j in range(1, k + 1):
        c = g[k + j]
        h = [a + c * b for a, b in itertools.zip_longest(h, pj[j], fillvalue=Fraction(0))]
    return poly_strip(h)


def _classify_selfreciprocal(g: Poly) -> RootModuli:
    """Squarefree, inversion-closed root set: exact count via y = x + 1/x and Sturm."""
    eq = 0
    for root in (Fraction(1), Fraction(-1)):
        if poly_degree(g) > 0 and poly_eval(g, root) == 0:
            g = poly_divmod(g, (-root, Fraction(1)))[0]
            eq += 1
    deg = poly_degree(g)
    if deg <= 0:
        return RootModuli(0, eq, 0)
    h = palindromic_to_trace_poly(poly_monic(g))
    k = deg // 2
    on_circle = sturm_count(h, Fraction(-2), Fraction(2))
    return RootModuli(k - on_circle, eq + 2 * on_circle, k - on_circle)


def _to_fraction(x: mpmath.mpf) -> Fraction:
    if x == 0:
        return Fraction(0)
    sign, man, exp, _ = x._mpf_
    return (-1) ** sign * Fraction(int(man)) * (Fraction(2) ** int(exp))


def _complex_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _complex_div(a, b):
    d = b[0] * b[0] + b[1] * b[1]
    return ((a[0] * b[0] + a[1] * b[1]) / d, (a[1] * b[0] - a[0] * b[1]) / d)


def _sqrt_sum_less(a: Fraction, b: Fraction, c: Fraction) -> bool:
    """Exact test sqrt(a) + sqrt(b) < sqrt(c) for nonnegative rationals."""
    s = c - a - b
    return s > 0 and s * s > 4 * a * b


def _certify_roots(p: Poly, approx) -> Optional[Tuple[int, int]]:
    """Exact inclusion-disk certificate; returns (inside, outside) or None.

    Uses the Weierstrass correction disks D(z_i, deg * |w_i|): when they are
    pairwise disjoint each contains exactly one root.  All tests are done in
    exact rational complex arithmetic.
    """
    deg = poly_degree(p)
    zs = [(_to_fraction(mpmath.re(z)), _to_fraction(mpmath.im(z))) for z in approx]
    if len(set(zs)) != deg:
        return None
    lc = p[-1]
    radii2 = []
    for i, z in enumerate(zs):
        val = (Fraction(0), Fraction(0))
        for c in reversed(p):
            val = _complex_mul(val, z)
            val = (val[0] + c, val[1])
        den = (lc, Fraction(0))
        for j, w in enumerate(zs):
            if j != i:
                den = _complex_mul(den, (z[0] - w[0], z[1] - w[1]))
        wi = _complex_div(val, den)
        radii2.append(deg * deg * (wi[0] ** 2 + wi[1] ** 2))
    for i in range(deg):
        for j in range(i + 1, deg):
            dist2 = (zs[i][0] - zs[j][0]) ** 2 + (zs[i][1] - zs[j][1]) ** 2
            if not _sqrt_sum_less(radii2[i], radii2[j], dist2):
                return None
    inside = outside = 0
    for z, r2 in zip(zs, radii2):
        m2 = z[0] ** 2 + z[1] ** 2
        if _sqrt_sum_less(m2, r2, Fraction(1)):
            inside += 1
        elif _sqrt_sum_less(Fraction(1), r2, m2):
            outside += 1
        else:
            return None
    return inside, outside


def _classify_off_circle(q: Poly, precision_cap: int) -> RootModuli:
    """Roots of ``q`` are known to avoid the unit circle; split them in/out."""
    deg = poly_degree(q)
    if deg <= 0:
        return RootModuli(0, 0, 0)
    if deg == 1:
        root = -q[0] / q[1]
        return RootModuli(1, 0, 0) if abs(root) < 1 else RootModuli(0, 0, 1)
    bits = 53
    last = None
    while bits <= precision_cap:
        with mpmath.workprec(bits):
            try:
                roots = mpmath.polyroots([mpmath.mpf(c.numerator) / c.denominator
                                          for c in reversed(q)],
                                         maxsteps=50 + bits, extraprec=bits)
            except mpmath.libmp.libhyper.NoConvergence:
                roots = None
            if roots is not None:
                last = [abs(z) for z in roots]
                cert = _certify_roots(q, roots)
                if cert is not None:
                    return RootModuli(cert[0], 0, cert[1])
        bits *= 2
    if last is None:
        return RootModuli(0, 0, 0, certified=False, precision_exhausted=True)
    inside = sum(1 for m in last if m < 1)
    return RootModuli(inside, 0, deg - inside, certified=False, precision_exhausted=True)


def classify_root_moduli(p: Sequence, precision_cap: int = DEFAULT_PRECISION_CAP) -> RootModuli:
    """Count roots of ``p`` (with multiplicity) of modulus <1, =1, >1.

    Unit-circle roots are isolated exactly: after a squarefree decomposition,
    ``gcd(f, reverse(f))`` carries every unit-circle root and is classified by
    Sturm counting of its trace polynomial on (-2, 2).  The cofactor has no
    roots on the circle and is certified numerically with precision doubling
    up to ``precision_cap`` bits.
    """
    p = poly_strip(p)
    if not p:
        raise ValueError("zero polynomial")
    zeros = 0
    while p[0] == 0:
        p = p[1:]
        zeros += 1
    result = RootModuli(zeros, 0, 0)
    for f, mult in squarefree_decomposition(p):
        g = poly_gcd(f, poly_reverse(f))
        part = RootModuli(0, 0, 0)
        if poly_degree(g) > 0:
            part = part + _classify_selfreciprocal(g)
            f = poly_divmod(f, g)[0]
        part = part + _classify_off_circle(poly_monic(f), precision_cap)
        result = result + part.scaled(mult)
    return result


def unit_circle_factor(p: Sequence) -> Optional[Poly]:
    """The monic factor of ``p`` whose roots are exactly its unit-circle roots.

    Returns ``None`` when that factor is not defined over Q (an irreducible
    factor with roots both on and off the circle).
    """
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** i
               for i, c in enumerate(poly_strip(p)))
    _, factors = sympy.factor_list(expr, x)
    out: Poly = (Fraction(1),)
    for fac, mult in factors:
        coeffs = tuple(Fraction(int(c.p), int(c.q))
                       for c in reversed(sympy.Poly(fac, x).all_coeffs()))
        rm = classify_root_moduli(coeffs)
        if rm.count_eq1 == 0:
            continue
        if rm.count_lt1 or rm.count_gt1 or not rm.certified:
            return None
        for _ in range(mult):
            out = poly_mul(out, coeffs)
    return poly_monic(out)


def poly_of_matrix(p: Poly, a: Matrix) -> Matrix:
    n = len(a)
    acc = tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n))
    for c in reversed(poly_strip(p)):
        acc = mat_add(mat_mul(acc, a), mat_scale(c, identity(n)))
    return normalize(acc)
