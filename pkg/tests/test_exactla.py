from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import GF as SGF
from sympy import QQ as SQQ
from sympy.polys.matrices import DomainMatrix

from locfrob import exactla as la

from conftest import FIELDS

field_st = st.sampled_from(FIELDS)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    F = draw(field_st)
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    entries = draw(st.lists(st.integers(-4, 4), min_size=r * c, max_size=r * c))
    return F, F.array(np.array(entries, dtype=object).reshape(r, c))


def oracle_rank(F, m):
    """Rank via sympy's domain matrices, independent of our elimination."""
    if m.shape[0] == 0:
        return 0
    dom = SQQ if F.is_rational else SGF(F.characteristic)
    rows = [[dom(int(x.numerator)) / dom(int(x.denominator)) if F.is_rational else dom(int(x)) for x in row]
            for row in m]
    return DomainMatrix(rows, m.shape, dom).rank()


def test_field_scalars():
    assert la.QQ("3/6") == Fraction(1, 2)
    assert la.GF(5)(Fraction(1, 2)) == 3
    assert la.QQ.format(Fraction(1, 2)) == "1/2" and la.QQ.format(Fraction(4)) == "4"
    assert la.GF(3).format(2) == 2
    with pytest.raises(ValueError):
        la.GF(4)
    with pytest.raises(ZeroDivisionError):
        la.GF(2)(Fraction(1, 2))


def test_rref_examples():
    F = la.GF(2)
    R, piv, r = la.rref(F, F.eye(3))
    assert np.array_equal(R, F.eye(3)) and piv == [0, 1, 2] and r == 3
    R, piv, r = la.rref(F, F.zeros(2, 4))
    assert not R.any() and piv == [] and r == 0
    R, piv, r = la.rref(F, F.array([[1, 1], [1, 1]]))
    assert R.tolist() == [[1, 1], [0, 0]] and r == 1


def test_solve_examples():
    Q = la.QQ
    x, ker = la.solve(Q, Q.array([[2]]), Q.array([1]))
    assert x.tolist() == [Fraction(1, 2)] and ker.shape[0] == 0
    x, ker = la.solve(Q, Q.zeros(2, 2), Q.zeros(2))
    assert ker.shape[0] == 2
    v = Q.array([3, -1])
    x, ker = la.solve(Q, Q.eye(2), v)
    assert x.tolist() == v.tolist() and ker.shape[0] == 0
    x, _ = la.solve(Q, Q.array([[1, 1], [1, 1]]), Q.array([1, 2]))
    assert x is None


def test_subspace_examples():
    F = la.QQ
    e = F.eye(3)
    assert la.intersect(F, e[:1], e[1:2]).shape[0] == 0
    assert la.same_subspace(F, la.intersect(F, e[:2], e[1:]), e[1:2])
    assert la.membership(F, F.add(e[0], e[1]), e[:2])
    assert not la.membership(F, e[2], e[:2])


@given(matrices())
def test_rref_idempotent(fm):
    F, m = fm
    R, piv, r = la.rref(F, m)
    R2, piv2, r2 = la.rref(F, R)
    assert np.array_equal(R, R2) and piv == piv2 and r == r2


@given(matrices())
def test_rank_nullity(fm):
    F, m = fm
    assert la.rank(F, m) + la.kernel(F, m).shape[0] == m.shape[1]


@given(matrices())
def test_rank_matches_independent_oracle(fm):
    F, m = fm
    assert la.rank(F, m) == oracle_rank(F, m)


@given(matrices())
def test_kernel_is_annihilated(fm):
    F, m = fm
    ker = la.kernel(F, m)
    if ker.shape[0] and m.shape[0]:
        assert F.is_zero(F.matmul(m, ker.T))


@given(matrices(), st.integers(0, 2 ** 32 - 1))
def test_canonical_basis(fm, seed):
    """Equal subspaces have identical canonical bases; a random change of basis keeps the span."""
    F, m = fm
    rng = np.random.default_rng(seed)
    basis = la.row_space(F, m)
    k = basis.shape[0]
    if k == 0:
        return
    while True:
        g = F.random(rng, (k, k))
        if la.is_invertible(F, g):
            break
    other = la.row_space(F, F.matmul(g, basis))
    assert np.array_equal(basis, other)
    assert la.same_subspace(F, basis, other)
    # dropping a row changes the span, so the canonical forms differ
    if k > 1:
        assert not np.array_equal(la.row_space(F, basis[1:], m.shape[1]), basis)


@given(matrices(max_rows=5, max_cols=5))
def test_solve_consistency(fm):
    F, m = fm
    if m.shape[0] == 0:
        return
    rng = np.random.default_rng(0)
    x0 = F.random(rng, m.shape[1])
    b = F.matmul(m, x0)
    x, ker = la.solve(F, m, b)
    assert x is not None and np.array_equal(F.matmul(m, x), b)


@st.composite
def subspace_pairs(draw):
    F = draw(field_st)
    n = draw(st.integers(1, 6))
    rows = [draw(st.integers(0, 5)) for _ in range(2)]
    out = []
    for r in rows:
        entries = draw(st.lists(st.integers(-3, 3), min_size=r * n, max_size=r * n))
        out.append(la.row_space(F, F.array(np.array(entries, dtype=object).reshape(r, n)), n))
    return F, out[0], out[1]


@given(subspace_pairs())
def test_intersection_and_sum_dimensions(data):
    F, u, v = data
    s, i = la.sum_subspace(F, u, v), la.intersect(F, u, v)
    assert s.shape[0] + i.shape[0] == u.shape[0] + v.shape[0]
    assert la.contains(F, u, i) and la.contains(F, v, i) and la.contains(F, s, u)


def test_inverse_roundtrip(rng):
    for F in FIELDS:
        for _ in range(5):
            m = F.random(rng, (4, 4))
            if la.is_invertible(F, m):
                assert np.array_equal(F.matmul(m, la.inverse(F, m)), F.eye(4))


def test_integer_fast_path_agrees():
    """Large integral rational matrices go through the int64 path; results must equal Fraction arithmetic."""
    Q = la.QQ
    rng = np.random.default_rng(3)
    a = Q.array(rng.integers(-50, 50, (6, 7)).tolist())
    b = Q.array(rng.integers(-50, 50, (7, 5)).tolist())
    slow = np.array([[sum((a[i, k] * b[k, j] for k in range(7)), Fraction(0)) for j in range(5)]
                     for i in range(6)], dtype=object)
    assert np.array_equal(Q.matmul(a, b), slow)


def test_quotient_projection():
    F = la.GF(3)
    basis = la.row_space(F, F.array([[1, 1, 0]]))
    proj, comp = la.quotient_projection(F, basis)
    assert proj.shape == (2, 3)
    assert F.is_zero(F.matmul(proj, basis.T))
