import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locfrob import algcore as ac
from locfrob import exactla as la
from locfrob import groups as gr
from locfrob import hopfcore as hc
from locfrob import repmod as rm
from locfrob.frobext import free_basis, group_inclusion, induce, restrict

from conftest import FIELDS

GROUPS = ["C1", "C2", "C4", "S3", "D4", "Q8", "C2xC2"]


@pytest.mark.parametrize("F", FIELDS, ids=lambda f: f.name)
@pytest.mark.parametrize("name", GROUPS)
def test_axioms_and_involutivity(F, name):
    G = gr.named_group(name)
    for build in (hc.group_algebra, hc.dual_function_algebra):
        a, h, fd = build(G, F)
        rep = hc.validate_hopf(h)
        assert rep.ok, rep.failures
        assert rep.data["involutive"] and hc.is_involutive(h)
        assert fd.symmetric and ac.is_unimodular(a)


def test_all_pairs_multiplicativity():
    a, h, _ = hc.group_algebra(gr.symmetric(3), la.GF(3))
    assert hc.validate_hopf(h, all_pairs=True).ok


def test_perturbations_are_detected():
    F = la.GF(3)
    a, h, _ = hc.group_algebra(gr.symmetric(3), F)
    D = h.coproduct.copy()
    D[1, 1, 1] = 2
    assert not hc.validate_hopf(hc.HopfData(a, D, h.antipode)).ok
    S = F.eye(a.dim)  # identity is not an antipode for a nonabelian group
    rep = hc.validate_hopf(hc.HopfData(a, h.coproduct, S))
    assert not rep.ok and any("antipode" in f for f in rep.failures)
    D2 = h.coproduct.copy()
    D2[2, 2, 2] = 0
    D2[2, 2, 0] = 1
    assert not hc.validate_hopf(hc.HopfData(a, D2, h.antipode)).ok


def test_examples():
    a, h, fd = hc.group_algebra(gr.cyclic(2), la.GF(2))
    assert a.dim == 2 and np.array_equal(h.antipode, la.GF(2).eye(2))
    a, h, fd = hc.group_algebra(gr.symmetric(3), la.QQ)
    assert a.dim == 6 and fd.symmetric and ac.is_semisimple(a)
    assert hc.group_algebra(gr.cyclic(1), la.QQ)[0].dim == 1
    F = la.QQ
    d2 = hc.dual_function_algebra(gr.cyclic(2), F)[0]
    assert ac.left_integrals(d2).tolist() == [[1, 0]]
    for name in GROUPS:
        for K in FIELDS:
            assert ac.maschke_semisimple(hc.dual_function_algebra(gr.named_group(name), K)[0])


def test_dual_pairing():
    for name in ["C4", "S3", "Q8"]:
        for F in (la.QQ, la.GF(2)):
            G = gr.named_group(name)
            h1 = hc.group_algebra(G, F)[1]
            h2 = hc.dual_function_algebra(G, F)[1]
            assert hc.dual_pairing_check(h1, h2, F.eye(G.order))
            P = F.eye(G.order)
            P[0, 1] = F.one
            assert not hc.dual_pairing_check(h1, h2, P)


def sign_module(a):
    F = a.field
    G = gr.symmetric(3)
    signs = [1 if sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j]) % 2 == 0 else -1
             for p in G.elements]
    return rm.FDModule(a, F.array(signs).reshape(-1, 1, 1), "sign")


def test_tensor_modules():
    F = la.QQ
    a, h, _ = hc.group_algebra(gr.symmetric(3), F)
    k, reg, sg = rm.trivial_module(a), rm.regular_module(a), sign_module(a)
    assert rm.is_isomorphic(hc.tensor_module(h, sg, sg), k)
    assert np.array_equal(hc.tensor_module(h, k, reg).action, reg.action)
    assert rm.is_isomorphic(hc.tensor_module(h, reg, k), reg)
    rng = np.random.default_rng(0)
    for _ in range(3):
        m = rm.random_module(a, rng, 4)
        assert not rm.validate_module(hc.tensor_module(h, m, sg))


@pytest.mark.parametrize("name", ["S3", "D4", "Q8"])
def test_adjoint_is_conjugation(name):
    F = la.GF(3)
    G = gr.named_group(name)
    a, h, _ = hc.group_algebra(G, F)
    inv = G.inverse
    for g in range(G.order):
        for x in range(G.order):
            conj = a.basis_vector(G.mul(G.mul(g, x), inv[g]))
            assert np.array_equal(hc.adjoint_action(h, a.basis_vector(g), a.basis_vector(x)), conj)
    x = F.random(np.random.default_rng(1), a.dim)
    assert np.array_equal(hc.adjoint_action(h, a.unit, x), x)
    central = F.array([1] * G.order)
    y = F.random(np.random.default_rng(2), a.dim)
    assert np.array_equal(hc.adjoint_action(h, y, central), F.scal(ac.augmentation(a, y), central))


def subgroup(G, order):
    return sorted(next(s for s in G.all_subgroups() if len(s) == order))


def pair(name, order, F):
    G = gr.named_group(name)
    elems = subgroup(G, order)
    K, _ = G.subgroup(elems)
    a, h, _ = hc.group_algebra(G, F)
    ak, hk, _ = hc.group_algebra(K, F)
    inc = group_inclusion(G, elems, F, B=ak, A=a)
    return G, elems, a, h, ak, hk, inc


def test_twisting_examples():
    F = la.QQ
    G, elems, a, h, ak, hk, inc = pair("S3", 3, F)
    fb = free_basis(inc)
    theta = hc.twisting_iso(h, fb, hk, sign_module(a), rm.trivial_module(ak))
    assert theta.matrix.shape == (2, 2) and theta.is_bijective() and theta.is_intertwiner()
    F = la.GF(2)
    G, elems, a, h, ak, hk, inc = pair("C4", 2, F)
    theta = hc.twisting_iso(h, free_basis(inc), hk, rm.regular_module(a), rm.trivial_module(ak))
    assert theta.matrix.shape == (8, 8) and theta.is_bijective()
    # K = H: the identity reshuffle
    a2, h2, _ = hc.group_algebra(gr.cyclic(2), F)
    inc2 = group_inclusion(gr.cyclic(2), [0, 1], F, B=a2, A=a2)
    m = rm.regular_module(a2)
    t2 = hc.twisting_iso(h2, free_basis(inc2), h2, m, rm.trivial_module(a2))
    assert np.array_equal(t2.matrix, F.eye(2))


@settings(max_examples=20)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([("S3", 3), ("C4", 2), ("D4", 2), ("S3", 2)]),
       st.sampled_from([la.GF(2), la.GF(3), la.QQ]))
def test_twisting_random(seed, case, F):
    G, elems, a, h, ak, hk, inc = pair(*case, F)
    rng = np.random.default_rng(seed)
    m, n = rm.random_module(a, rng, 4), rm.random_module(ak, rng, 3)
    assert hc.twisting_iso(h, free_basis(inc), hk, m, n).is_bijective()


def test_h_mod_k():
    F = la.GF(2)
    G, elems, a, h, ak, hk, inc = pair("C4", 2, F)
    q = hc.h_mod_k(h, inc, free_basis(inc))
    assert q.dim == 2
    whole = group_inclusion(G, list(range(4)), F, A=a)
    assert rm.is_isomorphic(hc.h_mod_k(h, whole), rm.trivial_module(a))


@pytest.mark.parametrize("case", [("S3", 3), ("C4", 2), ("D4", 4), ("Q8", 2)])
def test_h_mod_k_tensor_square_is_induced(case):
    """(H//K) ⊗ (H//K) ≅ H ⊗_K (H//K) for normal K."""
    for F in (la.GF(2), la.GF(3)):
        G, elems, a, h, ak, hk, inc = pair(*case, F)
        assert G.is_normal(elems)
        fb = free_basis(inc)
        q = hc.h_mod_k(h, inc, fb)
        assert q.dim * len(elems) == G.order
        assert rm.is_isomorphic(hc.tensor_module(h, q, q), induce(fb, restrict(inc, q)))


@pytest.mark.parametrize("name", ["S3", "S4", "D4", "Q8", "C2xC2"])
def test_normality_matches_group_theory(name):
    F = la.GF(2)
    G = gr.named_group(name)
    a, h, _ = hc.group_algebra(G, F)
    for sub in G.all_subgroups():
        res = hc.normality_check(h, group_inclusion(G, sub, F, A=a))
        assert res.consistent
        assert bool(res) == G.is_normal(sub)


def test_normality_examples():
    F = la.QQ
    G, elems, a, h, ak, hk, inc = pair("S3", 3, F)
    assert hc.normality_check(h, inc).normal
    G, elems, a, h, ak, hk, inc = pair("S3", 2, F)
    res = hc.normality_check(h, inc)
    assert not res.normal and res.consistent
    assert hc.normality_check(h, group_inclusion(G, list(range(6)), F, A=a)).normal


def test_subhopf_product():
    F = la.GF(3)
    G = gr.symmetric(3)
    a, h, _ = hc.group_algebra(G, F)
    k = hc.group_subalgebra_basis(G, subgroup(G, 3), F)
    transpositions = [s for s in G.all_subgroups() if len(s) == 2]
    l1 = hc.group_subalgebra_basis(G, transpositions[0], F)
    l2 = hc.group_subalgebra_basis(G, transpositions[1], F)
    assert hc.subhopf_product(h, k, l1).shape[0] == 6
    assert la.same_subspace(F, hc.subhopf_product(h, k, k), k)
    with pytest.raises(hc.NotNormalized):
        hc.subhopf_product(h, l1, l2)


def test_hopf_inclusion():
    F = la.GF(2)
    G, elems, a, h, ak, hk, inc = pair("D4", 4, F)
    assert hc.is_hopf_morphism(inc, hk, h)
