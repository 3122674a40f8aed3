import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from gbsgroups import ratlin
from gbsgroups.ratlin import RootModuli

small = st.integers(-9, 9)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n).map(
        lambda rows: tuple(tuple(r) for r in rows))


nonsingular = st.integers(1, 3).flatmap(square).filter(lambda m: ratlin.det(m) != 0)


def sympy_in_lattice(m, v):
    x = sympy.Matrix(m).inv() * sympy.Matrix(v)
    return all(c.is_integer for c in x)


def numpy_moduli(p):
    roots = np.roots([float(c) for c in reversed(p)])
    return (sum(abs(r) < 1 - 1e-9 for r in roots), sum(abs(abs(r) - 1) <= 1e-9 for r in roots),
            sum(abs(r) > 1 + 1e-9 for r in roots))


# -- hermite normal form -----------------------------------------------------

def test_hnf_identity():
    h, u = ratlin.hermite_normal_form(ratlin.identity(3))
    assert h == ratlin.identity(3) and u == ratlin.identity(3)


def test_hnf_already_reduced():
    h, u = ratlin.hermite_normal_form(((2, 0), (0, 3)))
    assert h == ((2, 0), (0, 3)) and u == ratlin.identity(2)


def test_hnf_2468_row_lattice():
    m = ((2, 4), (6, 8))
    h, u = ratlin.hermite_normal_form(m)
    assert abs(ratlin.det(h)) == 8
    assert h[0][1] == 0 and h[0][0] > 0 and h[1][1] > 0
    # same row lattice: rows of each are integral combinations of the other's rows
    for a, b in ((h, m), (m, h)):
        coeffs = sympy.Matrix(a) * sympy.Matrix(b).inv()
        assert all(c.is_integer for c in coeffs)


def test_hnf_random_500():
    rng = random.Random(7)
    for _ in range(500):
        n = rng.randint(1, 4)
        m = tuple(tuple(rng.randint(-9, 9) for _ in range(n)) for _ in range(n))
        h, u = ratlin.hermite_normal_form(m)
        assert ratlin.mat_mul(u, m) == h
        assert ratlin.det(u) in (1, -1)
        for i in range(n):
            for j in range(i + 1, n):
                assert h[i][j] == 0


# -- coset representatives ------------------------------------------------------

def test_coset_reps_scalar():
    assert ratlin.coset_reps(((5,),)) == tuple((i,) for i in range(5))


def test_coset_reps_identity():
    assert ratlin.coset_reps(ratlin.identity(2)) == ((0, 0),)


def test_coset_reps_diag23_bruteforce():
    m = ((2, 0), (0, 3))
    reps = ratlin.coset_reps(m)
    assert len(reps) == 6
    box = list(itertools.product(range(2), range(3)))
    assert sorted(reps) == box and list(reps) == sorted(reps)
    for a, b in itertools.combinations(reps, 2):
        assert not sympy_in_lattice(m, ratlin.vec_sub(a, b))


def test_coset_reps_singular():
    with pytest.raises(ratlin.SingularMatrix):
        ratlin.coset_reps(((1, 2), (2, 4)))


@given(nonsingular)
def test_coset_reps_count_and_distinct(m):
    if abs(ratlin.det(m)) > 200:
        return
    reps = ratlin.coset_reps(m)
    assert len(reps) == abs(ratlin.det(m))
    for a, b in itertools.combinations(reps, 2):
        assert ratlin.solve_membership(m, ratlin.vec_sub(a, b)) is None


@given(nonsingular, st.lists(small, min_size=3, max_size=3))
def test_split_reconstructs(m, v):
    v = tuple(v[:len(m)])
    sp = ratlin.lattice_splitter(m)
    r, y = sp.split(v)
    assert ratlin.vec_add(r, ratlin.mat_vec(sp.basis, y)) == v
    assert all(0 <= r[i] < sp.box[i] for i in range(len(m)))
    assert ratlin.mat_mul(m, sp.coeffs) == sp.basis
    assert r in set(ratlin.coset_reps(m)) or abs(ratlin.det(m)) > 200


# -- membership -------------------------------------------------------------------

def test_membership_examples():
    assert ratlin.solve_membership(((2,),), (4,)) == (2,)
    assert ratlin.solve_membership(((2,),), (3,)) is None
    x = ratlin.solve_membership(((1, 2), (0, 1)), (3, 1))
    assert x == (1, 1) and ratlin.mat_vec(((1, 2), (0, 1)), x) == (3, 1)


@given(nonsingular, st.lists(small, min_size=3, max_size=3))
def test_membership_matches_sympy(m, v):
    v = tuple(v[:len(m)])
    x = ratlin.solve_membership(m, v)
    assert (x is not None) == sympy_in_lattice(m, v)
    if x is not None:
        assert ratlin.mat_vec(m, x) == v


# -- characteristic polynomial ---------------------------------------------------

def test_char_poly_examples():
    assert ratlin.char_poly(ratlin.identity(2)) == (1, -2, 1)
    assert ratlin.char_poly(((1, 1), (0, 1))) == (1, -2, 1)
    assert ratlin.char_poly(((2,),)) == (-2, 1)


@given(nonsingular)
def test_char_poly_matches_sympy(m):
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.Matrix(m).charpoly(x).as_expr(), x).all_coeffs()
    assert ratlin.char_poly(m) == tuple(Fraction(int(c)) for c in reversed(expected))


@given(nonsingular, nonsingular)
def test_char_poly_conjugation_invariant(a, b):
    if len(a) != len(b):
        return
    conj = ratlin.mat_mul(ratlin.mat_mul(a, b), ratlin.mat_inv(a))
    assert ratlin.char_poly(conj) == ratlin.char_poly(b)


# -- root moduli ------------------------------------------------------------------

@pytest.mark.parametrize("p,expected", [
    ((-2, 1), (0, 0, 1)),
    ((1, -2, 1), (0, 2, 0)),
    ((1, -3, 1), (1, 0, 1)),
    ((1, 0, 1), (0, 2, 0)),
    ((0, 0, 1), (2, 0, 0)),
    ((3, 1, 0, 0, 2), (0, 0, 4)),
])
def test_classify_examples(p, expected):
    rm = ratlin.classify_root_moduli(p)
    assert rm.counts == expected and rm.certified


def test_classify_quadratic_formula_oracle():
    # (3 +- sqrt 5)/2
    r1, r2 = (3 + 5 ** 0.5) / 2, (3 - 5 ** 0.5) / 2
    assert r1 > 1 > r2 > 0
    assert ratlin.classify_root_moduli((1, -3, 1)).counts == (1, 0, 1)


def test_classify_salem_factor():
    # Lehmer's polynomial: one root outside, one inside, eight on the circle
    lehmer = (1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1)
    rm = ratlin.classify_root_moduli(lehmer)
    assert rm.counts == (1, 8, 1) and rm.certified
    assert ratlin.unit_circle_factor(lehmer) is None


def test_unit_circle_factor_product():
    p = ratlin.poly_mul((1, -3, 1), (1, 0, 1))
    assert ratlin.unit_circle_factor(p) == (1, 0, 1)


poly = st.lists(st.integers(-6, 6), min_size=2, max_size=6).filter(lambda c: c[-1] != 0)


@given(poly)
def test_classify_matches_numpy(p):
    rm = ratlin.classify_root_moduli(p)
    assert sum(rm.counts) == len(p) - 1
    if rm.certified:
        roots = np.roots([float(c) for c in reversed(p)])
        # skip numerically ambiguous inputs for the float oracle
        if all(abs(abs(r) - 1) > 1e-6 or abs(abs(r) - 1) < 1e-12 for r in roots):
            assert rm.counts == numpy_moduli(p)


@given(poly, poly)
def test_classify_multiplicative(p, q):
    a, b = ratlin.classify_root_moduli(p), ratlin.classify_root_moduli(q)
    if a.certified and b.certified:
        assert ratlin.classify_root_moduli(ratlin.poly_mul(p, q)).counts == (a + b).counts
