from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from locfrob import algcore as ac
from locfrob import exactla as la
from locfrob import groups as gr
from locfrob.suites import algebra_catalog

from conftest import FIELDS

GROUPS = ["C1", "C2", "C3", "C4", "C6", "S3", "D4", "Q8", "C2xC2"]


def group_alg(name, F):
    return ac.algebra_from_group(gr.named_group(name), F)


def test_validate_examples():
    F = la.GF(2)
    assert ac.validate_algebra(ac.ground_field(F)).ok
    a = group_alg("C2", F)
    assert ac.validate_algebra(a).ok
    c = a.c.copy()
    c[1, 1, 0] = 0  # g*g no longer 1
    bad = ac.Algebra(F, c, a.unit, a.aug, a.labels, "broken")
    rep = ac.validate_algebra(bad)
    assert not rep.ok and any("(g, g" in f or "g, g)" in f for f in rep.failures)


def test_multiply_examples():
    F = la.GF(2)
    a = group_alg("C2", F)
    g = a.element({"g": 1})
    assert np.array_equal(ac.multiply(a, a.unit, g), g)
    assert np.array_equal(ac.multiply(a, g, g), a.unit)
    t = a.element([1, 1])
    assert F.is_zero(ac.multiply(a, t, t))


@pytest.mark.parametrize("F", FIELDS, ids=lambda f: f.name)
@pytest.mark.parametrize("name", GROUPS)
def test_group_form_gram_is_symmetric_permutation(F, name):
    G = gr.named_group(name)
    a = ac.algebra_from_group(G, F)
    fd = ac.frobenius_data(a, a.basis_vector(G.identity), require_symmetric=True)
    expected = np.zeros((G.order, G.order), dtype=int)
    for g in range(G.order):
        expected[g, G.inverse[g]] = 1
    assert np.array_equal(np.array(fd.gram, dtype=int), expected)
    # dual bases
    pairs = F.tensordot(F.tensordot(fd.u, a.c, ([1], [0])), fd.v, ([1], [1]))  # (i, k, j)
    vals = F.tensordot(pairs, fd.form, ([1], [0]))
    assert np.array_equal(vals, F.eye(G.order))


def test_degenerate_form():
    F = la.GF(2)
    a = group_alg("C2", F)
    with pytest.raises(ac.DegenerateForm):
        ac.frobenius_data(a, a.aug)


@pytest.mark.parametrize("F", FIELDS, ids=lambda f: f.name)
@pytest.mark.parametrize("name", GROUPS)
def test_integrals_and_maschke(F, name):
    G = gr.named_group(name)
    a = ac.algebra_from_group(G, F)
    li, ri = ac.left_integrals(a), ac.right_integrals(a)
    total = F.array([1] * G.order)
    assert li.shape[0] == ri.shape[0] == 1
    assert la.same_subspace(F, li, total.reshape(1, -1))
    assert ac.is_unimodular(a)
    p = F.characteristic
    assert ac.maschke_semisimple(a) == (p == 0 or G.order % p != 0)
    assert ac.maschke_semisimple(a) == ac.is_semisimple(a)


def test_integral_examples():
    F = la.GF(2)
    assert ac.left_integrals(group_alg("C2", F)).tolist() == [[1, 1]]
    assert not ac.maschke_semisimple(group_alg("C2", F))
    assert ac.maschke_semisimple(group_alg("C2", la.GF(3)))
    assert ac.maschke_semisimple(group_alg("S3", la.QQ))


def test_radical_examples():
    F = la.GF(2)
    assert ac.radical(group_alg("C2", F)).basis.tolist() == [[1, 1]]
    assert ac.radical(group_alg("C2", la.QQ)).dim == 0
    c4 = group_alg("C4", F)
    assert la.same_subspace(F, c4.radical.basis, c4.augmentation_ideal)
    assert c4.radical.dim == 3


@pytest.mark.parametrize("F", [la.GF(2), la.GF(3)], ids=lambda f: f.name)
def test_radical_matches_bruteforce_on_catalog(F):
    for a in algebra_catalog(F):
        assert np.array_equal(a.radical.basis, ac.radical_bruteforce(a)), a.name


@pytest.mark.parametrize("F", FIELDS, ids=lambda f: f.name)
def test_radical_is_nilpotent_two_sided_ideal(F):
    for name in GROUPS:
        a = group_alg(name, F)
        rad = a.radical.basis
        if rad.shape[0] == 0:
            continue
        for side in (ac.Side.LEFT, ac.Side.RIGHT):
            assert la.same_subspace(F, ac.generated_ideal(a, rad, side), rad)
        assert ac.is_nilpotent_subspace(a, rad)


def test_p_group_radical_is_augmentation_ideal():
    for p, names in [(2, ["C2", "C4", "C8", "D4", "Q8", "C2xC2"]), (3, ["C3"])]:
        F = la.GF(p)
        for name in names:
            a = group_alg(name, F)
            assert la.same_subspace(F, a.radical.basis, a.augmentation_ideal)
            assert ac.is_local(a)


def test_socle_examples():
    F = la.GF(2)
    c4 = group_alg("C4", F)
    for side in (ac.Side.LEFT, ac.Side.RIGHT):
        assert ac.socle(c4, side).basis.tolist() == [[1, 1, 1, 1]]
    s3 = group_alg("S3", la.QQ)
    assert ac.socle(s3).dim == 6
    assert ac.socle(group_alg("C2", F)).basis.tolist() == [[1, 1]]


@pytest.mark.parametrize("F", [la.GF(2), la.GF(3)], ids=lambda f: f.name)
def test_socles_agree_on_symmetric_algebras(F):
    for name in GROUPS:
        a = group_alg(name, F)
        assert ac.socle(a, ac.Side.LEFT) == ac.socle(a, ac.Side.RIGHT)


def test_dichotomy_examples():
    F = la.GF(2)
    a = group_alg("C2", F)
    l2 = ac.Ideal(a, ac.Side.LEFT, F.array([[1, 1]]))
    assert isinstance(ac.minimal_ideal_dichotomy(l2), ac.SquareZero)
    Q = la.QQ
    q = group_alg("C2", Q)
    for sign in (1, -1):
        ideal = ac.Ideal(q, ac.Side.LEFT, la.row_space(Q, Q.array([[1, sign]])))
        res = ac.minimal_ideal_dichotomy(ideal)
        assert isinstance(res, ac.Idempotent)
        assert res.e.tolist() == [Fraction(1, 2), Fraction(sign, 2)]
    with pytest.raises(ac.NotMinimal):
        ac.minimal_ideal_dichotomy(ac.Ideal(q, ac.Side.LEFT, Q.eye(2)))


def test_annihilator_examples(rng):
    F = la.GF(2)
    a = group_alg("C2", F)
    assert ac.annihilator(a, [a.unit]).dim == 0
    assert ac.annihilator(a, [a.element([1, 1])]).basis.tolist() == [[1, 1]]
    b = group_alg("C4", la.GF(3))
    for _ in range(5):
        v, w = b.field.random(rng, 4), b.field.random(rng, 4)
        both = ac.annihilator(b, [v, w]).basis
        assert la.same_subspace(b.field, both, la.intersect(b.field, ac.annihilator(b, [v]).basis,
                                                              ac.annihilator(b, [w]).basis))


@pytest.mark.parametrize("p", [2, 3])
def test_field_product_counterexample(p):
    F = la.GF(p)
    r0 = group_alg(f"C{p}", F)
    R, fd = ac.field_product_counterexample(F, r0, r0.basis_vector(0))
    assert R.dim == p + 1
    assert la.is_invertible(F, fd.gram)
    assert la.membership(F, R.basis_vector(0), ac.left_integrals(R))
    assert not ac.is_semisimple(R)
    assert ac.validate_algebra(R).ok


def test_product_of_fields_is_semisimple():
    Q = la.QQ
    a = ac.product_algebra(ac.ground_field(Q), ac.ground_field(Q))
    assert ac.validate_algebra(a).ok and ac.is_semisimple(a)


@given(st.sampled_from(GROUPS), st.sampled_from(FIELDS), st.integers(0, 2 ** 32 - 1))
def test_associativity_on_random_elements(name, F, seed):
    a = group_alg(name, F)
    rng = np.random.default_rng(seed)
    x, y, z = (F.random(rng, a.dim) for _ in range(3))
    lhs = ac.multiply(a, ac.multiply(a, x, y), z)
    rhs = ac.multiply(a, x, ac.multiply(a, y, z))
    assert np.array_equal(lhs, rhs)
    assert ac.augmentation(a, ac.multiply(a, x, y)) == F(ac.augmentation(a, x) * ac.augmentation(a, y))
