"""Hopf structure on algebras: group algebras, function algebras of finite groups,
diagonal tensor modules, adjoint actions, the twisting isomorphism, H//K and normality."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import exactla as la
from .algcore import (Algebra, FrobeniusData, Report, Side, algebra_from_group, frobenius_data,
                      products, validate_algebra)
from .frobext import AlgebraMorphism, FreeBasis, IsoFailure, induce, restrict
from .repmod import (FDModule, ModuleHom, is_intertwiner, isomorphism, quotient_module, regular_module,
                     submodule_generated, trivial_module)


class NotNormalized(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class HopfData:
    """``coproduct[k, a, b]`` is the coefficient of ``b_a (x) b_b`` in Δ(b_k);
    ``antipode`` acts on column vectors.  The counit is the base augmentation."""

    base: Algebra
    coproduct: np.ndarray
    antipode: np.ndarray

    @property
    def field(self):
        return self.base.field

    def delta(self, x: np.ndarray) -> np.ndarray:
        """Δ(x) as a dim x dim coefficient matrix."""
        return self.field.tensordot(x, self.coproduct, 1)

    def chi(self, x: np.ndarray) -> np.ndarray:
        return self.field.matmul(self.antipode, x)

    def coproduct_matrix(self) -> np.ndarray:
        """Δ as a dim x dim^2 matrix, row k holding Δ(b_k) in row-major order."""
        d = self.base.dim
        return self.coproduct.reshape(d, d * d)


def _ring_view(F, arrays):
    """Integer copies for exact ring-only checks over ℚ when every entry is integral."""
    if not F.is_rational:
        return arrays, F.tensordot, F.reduce
    views = [la.integer_view(F, x) for x in arrays]
    if any(v is None for v in views):
        return arrays, F.tensordot, F.reduce
    return views, lambda x, y, axes: np.tensordot(x, y, axes=axes), lambda x: x


def validate_hopf(h: HopfData, all_pairs: bool = False) -> Report:
    """Coassociativity, counit, multiplicativity of Δ, antipode laws and involutivity.

    Multiplicativity is checked on (generator, basis element) pairs, which
    implies it on all products; ``all_pairs`` checks every pair.
    """
    a = h.base
    F = a.field
    d = a.dim
    rep = validate_algebra(a)
    rep.name = "hopf"
    gens = F.eye(d) if all_pairs else a.generators
    (D, S, c, aug, unit, gens), td, red = _ring_view(
        F, [h.coproduct, h.antipode, a.c, a.aug, a.unit, gens])
    lhs = td(D, D, ([1], [0])).transpose(0, 2, 3, 1)  # sum_a D[k,a,z] D[a,x,y]
    rhs = td(D, D, ([2], [0]))  # sum_b D[k,x,b] D[b,y,z]
    if not np.array_equal(lhs, rhs):
        k = np.argwhere(lhs != rhs)[0][0]
        rep.fail(f"coassociativity fails on {a.labels[k]}")
    eye = np.eye(d, dtype=np.int64)
    if not (np.array_equal(td(aug, D, ([0], [1])), eye) and np.array_equal(td(D, aug, ([2], [0])), eye)):
        rep.fail("counit law fails")
    if not np.array_equal(td(unit, D, 1), red(np.multiply.outer(unit, unit))):
        rep.fail("Δ(1) != 1 (x) 1")
    dc = td(D, c, ([2], [1]))  # (j, p2, q1, y): second legs multiplied
    for g in gens:
        Pg = td(g, D, 1)
        gb = td(g, c, 1)  # (j, k): g b_j
        lhs = td(gb, D, 1)  # (j, x, y)
        rhs = td(c, td(Pg, dc, ([1], [2])), ([0, 1], [0, 2])).transpose(1, 0, 2)
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            rep.fail(f"Δ not multiplicative on ({a.format_element(F.array(list(g)))}, {a.labels[bad[0][0]]})")
    # sum D[k,a,b] χ(b_a) b_b = ε(b_k) 1 = sum D[k,a,b] b_a χ(b_b)
    left = td(td(D, S, ([1], [1])), c, ([2, 1], [0, 1]))
    right = td(td(D, S, ([2], [1])), c, ([1, 2], [0, 1]))
    target = red(np.multiply.outer(aug, unit))
    if not np.array_equal(left, target):
        rep.fail("antipode law fails for χ (x) id")
    if not np.array_equal(right, target):
        rep.fail("antipode law fails for id (x) χ")
    rep.data["involutive"] = is_involutive(h)
    return rep


def is_involutive(h: HopfData) -> bool:
    F = h.field
    return bool(np.array_equal(F.matmul(h.antipode, h.antipode), F.eye(h.base.dim)))


# ---------------------------------------------------------------------------
# constructions


def group_algebra(G, F) -> tuple[Algebra, HopfData, FrobeniusData]:
    """``F[G]`` with Δ(g) = g (x) g, χ(g) = g^-1, ε(g) = 1 and form λ(g) = δ_{g,e}."""
    a = algebra_from_group(G, F)
    n = G.order
    D = F.zeros(n, n, n)
    S = F.zeros(n, n)
    for g in range(n):
        D[g, g, g] = F.one
        S[G.inverse[g], g] = F.one
    form = F.unit_vector(n, G.identity)
    fd = frobenius_data(a, form, require_symmetric=True)
    return a, HopfData(a, D, S), fd


def dual_function_algebra(G, F) -> tuple[Algebra, HopfData, FrobeniusData]:
    """Functions on G: basis δ_x, pointwise product, Δ(δ_x) = sum_{uv=x} δ_u (x) δ_v,
    ε(f) = f(e), χ(δ_x) = δ_{x^-1}, form λ(f) = sum_x f(x)."""
    n = G.order
    c = np.zeros((n, n, n), dtype=np.int64)
    for x in range(n):
        c[x, x, x] = 1
    unit = np.ones(n, dtype=np.int64)
    aug = np.zeros(n, dtype=np.int64)
    aug[G.identity] = 1
    a = Algebra.build(F, c, unit, aug, [f"d({lab})" for lab in G.labels], name=f"{F.name}({G.name})")
    D = F.zeros(n, n, n)
    S = F.zeros(n, n)
    for u in range(n):
        for v in range(n):
            D[G.mul(u, v), u, v] = F.one
        S[G.inverse[u], u] = F.one
    fd = frobenius_data(a, F.array([1] * n), require_symmetric=True)
    return a, HopfData(a, D, S), fd


def is_hopf_morphism(inc: AlgebraMorphism, hk: HopfData, hh: HopfData) -> bool:
    """Δ_H ι = (ι (x) ι) Δ_K and χ_H ι = ι χ_K."""
    F = inc.field
    M = inc.matrix
    lhs = F.tensordot(M.T, hh.coproduct, 1)  # (q, a, b)
    rhs = F.tensordot(F.tensordot(hk.coproduct, M, axes=([1], [1])), M, axes=([1], [1]))  # (q, a, b)
    if not np.array_equal(lhs, rhs):
        return False
    return bool(np.array_equal(F.matmul(hh.antipode, M), F.matmul(M, hk.antipode)))


def dual_pairing_check(h1: HopfData, h2: HopfData, pairing: np.ndarray) -> bool:
    """Does ``<x, f>`` (matrix ``pairing[i, x]``) turn products of h1 into coproducts of h2 and back?"""
    F = h1.field
    a1, a2 = h1.base, h2.base
    P = pairing
    # <b_i b_j, f_x> = sum <b_i, f_u><b_j, f_v> D2[x, u, v]
    lhs = F.tensordot(a1.c, P, 1)  # (i, j, x)
    rhs = F.tensordot(F.tensordot(P, h2.coproduct, axes=([1], [1])), P, axes=([2], [1]))  # (i, x, j)
    if not np.array_equal(lhs, rhs.transpose(0, 2, 1)):
        return False
    # <b_k, f_u f_v> = sum D1[k, i, j] <b_i, f_u><b_j, f_v>
    lhs2 = F.tensordot(P, a2.c, axes=([1], [2]))  # (k, u, v)
    rhs2 = F.tensordot(F.tensordot(h1.coproduct, P, axes=([1], [0])), P, axes=([1], [0]))  # (k, u, v)
    return bool(np.array_equal(lhs2, rhs2))


# ---------------------------------------------------------------------------
# modules


def tensor_module(h: HopfData, l: FDModule, m: FDModule) -> FDModule:
    """``h (l (x) m) = sum h' l (x) h'' m``; carrier index is (l major, m minor)."""
    F = h.field
    d = h.base.dim
    nl, nm = l.dim, m.dim
    if nl == 0 or nm == 0:
        return FDModule(h.base, F.zeros(d, nl * nm, nl * nm), name=f"{l.name}(x){m.name}")
    t = F.tensordot(h.coproduct, l.action, axes=([1], [0]))  # (k, b, l1, l2)
    t = F.tensordot(t, m.action, axes=([1], [0]))  # (k, l1, l2, m1, m2)
    act = t.transpose(0, 1, 3, 2, 4).reshape(d, nl * nm, nl * nm)
    return FDModule(h.base, np.ascontiguousarray(act), name=f"{l.name}(x){m.name}")


def adjoint_action(h: HopfData, a: np.ndarray, x: np.ndarray, side: Side = Side.LEFT) -> np.ndarray:
    """Left: ``sum a' x χ(a'')``.  Right: ``sum χ(a') x a''``."""
    F = h.field
    A = h.base
    P = h.delta(a)
    out = F.zeros(A.dim)
    eye = F.eye(A.dim)
    Lx = F.tensordot(x, A.L, 1)
    for p, q in zip(*np.nonzero(P)):
        if side is Side.LEFT:
            term = F.matmul(F.tensordot(eye[p], A.L, 1), F.matmul(Lx, h.chi(eye[q])))
        else:
            term = F.matmul(F.tensordot(h.chi(eye[p]), A.L, 1), F.matmul(Lx, eye[q]))
        out = F.add(out, F.scal(P[p, q], term))
    return out


def twisting_iso(h: HopfData, fb: FreeBasis, hk: HopfData, m: FDModule, n: FDModule) -> ModuleHom:
    """``Θ: M (x) (H (x)_K N) -> H (x)_K (M (x) N)``, ``m (x) (t_j (x) v) -> sum t'_j (x) (χ(t''_j) m (x) v)``.

    The K-action on M (x) N is diagonal through ``hk``; ``b (x)_K w`` is rewritten
    with the right coordinates of b in the free basis.
    """
    F = h.field
    inc = fb.inclusion
    H = inc.target
    r = fb.rank
    dm, dn = m.dim, n.dim
    ind_n = induce(fb, n)
    source = tensor_module(h, m, ind_n)
    mn = tensor_module(hk, restrict(inc, m), n)
    target = induce(fb, mn)
    w = dm * dn
    theta = F.zeros(r * w, dm * r * dn)
    eye_n = F.eye(dn)
    for j in range(r):
        P = h.delta(fb.right[j])
        block_j = [F.zeros(w, w) for _ in range(r)]
        for a_idx, b_idx in zip(*np.nonzero(P)):
            coef = P[a_idx, b_idx]
            chi_b = h.chi(H.basis_vector(b_idx))
            twist = F.kron(m.rho(chi_b), eye_n)  # m (x) v -> χ(b) m (x) v
            kcoords = fb.right_coordinates(H.basis_vector(a_idx))  # (i, q)
            for i in range(r):
                if F.is_zero(kcoords[i]):
                    continue
                blk = F.scal(coef, F.matmul(mn.rho(kcoords[i]), twist))
                block_j[i] = F.add(block_j[i], blk)
        # place: source column (mi, j, ni), target row (i, mo, no)
        for i in range(r):
            blk = block_j[i].reshape(dm, dn, dm, dn)  # (mo, no, mi, ni)
            rows = slice(i * w, (i + 1) * w)
            for mi in range(dm):
                cols = [mi * r * dn + j * dn + ni for ni in range(dn)]
                theta[rows, cols] = blk[:, :, mi, :].reshape(w, dn)
    if not is_intertwiner(source, target, theta):
        raise IsoFailure("twisting map is not H-linear")
    if not la.is_invertible(F, theta):
        raise IsoFailure("twisting map is not bijective")
    return ModuleHom(source, target, theta)


def h_mod_k(h: HopfData, inc: AlgebraMorphism, fb: Optional[FreeBasis] = None) -> FDModule:
    """``H // K = H / H K^+``; when ``fb`` is given the iso with ``induce(k)`` is checked."""
    F = h.field
    H, K = inc.target, inc.source
    kplus = F.matmul(K.augmentation_ideal, inc.matrix.T)  # rows ι(k) for a basis of K^+
    reg = regular_module(H)
    sub = submodule_generated(reg, kplus)
    q, _ = quotient_module(reg, sub)
    q = FDModule(H, q.action, name="H//K")
    if q.dim * K.dim != H.dim:
        raise AssertionError("dim H//K != dim H / dim K")
    if fb is not None and isomorphism(q, induce(fb, trivial_module(K))) is None:
        raise IsoFailure("H//K is not isomorphic to the induced trivial module")
    return q


@dataclass(frozen=True)
class NormalityResult:
    hk_equals_kh: bool
    adjoint_stable: bool

    @property
    def normal(self) -> bool:
        return self.hk_equals_kh and self.adjoint_stable

    @property
    def consistent(self) -> bool:
        return self.hk_equals_kh == self.adjoint_stable

    def __bool__(self):
        return self.normal


def normality_check(h: HopfData, inc: AlgebraMorphism) -> NormalityResult:
    """Compare ``H K^+`` with ``K^+ H`` and test stability of K under both adjoint actions."""
    F = h.field
    H, K = inc.target, inc.source
    kplus = F.matmul(K.augmentation_ideal, inc.matrix.T)
    eye = F.eye(H.dim)
    hk = la.row_space(F, products(H, eye, kplus), H.dim) if kplus.shape[0] else F.zeros(0, H.dim)
    kh = la.row_space(F, products(H, kplus, eye), H.dim) if kplus.shape[0] else F.zeros(0, H.dim)
    equal = hk.shape == kh.shape and bool(np.array_equal(hk, kh))
    image = la.image(F, inc.matrix)
    return NormalityResult(equal, _adjoint_stable(h, eye, inc.matrix.T, image))


def _adjoint_stable(h: HopfData, acting: np.ndarray, elems: np.ndarray, space: np.ndarray) -> bool:
    F = h.field
    for side in (Side.LEFT, Side.RIGHT):
        imgs = [adjoint_action(h, a, x, side) for a in acting for x in elems]
        if imgs and not la.contains(F, space, np.stack(imgs)):
            return False
    return True


def subhopf_product(h: HopfData, k_basis: np.ndarray, l_basis: np.ndarray) -> np.ndarray:
    """Basis of ``KL``; requires L to normalise K and checks KL = LK and Δ, χ closure."""
    F = h.field
    A = h.base
    k_basis = la.row_space(F, k_basis, A.dim)
    l_basis = la.row_space(F, l_basis, A.dim)
    if not _adjoint_stable_one_side(h, l_basis, k_basis):
        raise NotNormalized("L does not normalise K under the adjoint action")
    kl = la.row_space(F, products(A, k_basis, l_basis), A.dim)
    lk = la.row_space(F, products(A, l_basis, k_basis), A.dim)
    if not la.same_subspace(F, kl, lk):
        raise AssertionError("KL != LK")
    for v in kl:
        P = h.delta(v)
        if not (la.contains(F, kl, P.T) and la.contains(F, kl, P)):
            raise AssertionError("KL is not closed under the coproduct")
    if not la.contains(F, kl, F.matmul(kl, h.antipode.T)):
        raise AssertionError("KL is not closed under the antipode")
    return kl


def _adjoint_stable_one_side(h: HopfData, acting: np.ndarray, space: np.ndarray) -> bool:
    F = h.field
    imgs = [adjoint_action(h, a, x, Side.LEFT) for a in acting for x in space]
    return not imgs or la.contains(F, space, np.stack(imgs))


def group_subalgebra_basis(G, elems, F) -> np.ndarray:
    """Rows e_g for g in a subgroup, as a subspace of F[G]."""
    out = F.zeros(len(elems), G.order)
    for i, g in enumerate(sorted(elems)):
        out[i, g] = F.one
    return out
