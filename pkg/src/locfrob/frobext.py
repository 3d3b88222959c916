"""Algebra morphisms, Frobenius-extension witnesses, free bases over subalgebras,
and induction / coinduction along inclusions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import exactla as la
from .algcore import Algebra, FrobeniusData, Report, algebra_from_group, products
from .repmod import FDModule, ModuleHom, is_intertwiner


class NotFree(ValueError):
    pass


class IsoFailure(AssertionError):
    pass


@dataclass(frozen=True, eq=False)
class AlgebraMorphism:
    """``matrix`` has the images of the source basis as columns."""

    source: Algebra
    target: Algebra
    matrix: np.ndarray
    inclusion: bool = True

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise la.DimensionMismatch("morphism matrix shape does not match the algebras")
        if self.source.field != self.target.field:
            raise la.FieldMismatch("morphism between algebras over different fields")

    @property
    def field(self):
        return self.source.field

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.field.matmul(self.matrix, x)

    def compose(self, other: "AlgebraMorphism") -> "AlgebraMorphism":
        """``self o other``."""
        return AlgebraMorphism(other.source, self.target, self.field.matmul(self.matrix, other.matrix),
                               self.inclusion and other.inclusion)


def identity_morphism(a: Algebra) -> AlgebraMorphism:
    return AlgebraMorphism(a, a, a.field.eye(a.dim))


def validate_morphism(f: AlgebraMorphism) -> Report:
    F = f.field
    b, a = f.source, f.target
    rep = Report("morphism")
    M = f.matrix
    if not np.array_equal(f(b.unit), a.unit):
        rep.fail("not unital")
    # M (b_i b_j) = (M b_i)(M b_j)
    lhs = F.tensordot(b.c, M.T, 1)  # (i, j, target)
    imgs = M.T  # rows: images of source basis
    rhs = products(a, imgs, imgs).reshape(b.dim, b.dim, a.dim)
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        i, j = bad[0][:2]
        rep.fail(f"not multiplicative on ({b.labels[i]}, {b.labels[j]})")
    if not np.array_equal(F.matmul(a.aug.reshape(1, -1), M)[0], b.aug):
        rep.fail("does not preserve the augmentation")
    if f.inclusion and la.rank(F, M) != b.dim:
        rep.fail("inclusion is not injective")
    return rep


def group_inclusion(K, H_elems: Sequence[int], F, B: Optional[Algebra] = None,
                    A: Optional[Algebra] = None) -> AlgebraMorphism:
    """``F[H] -> F[K]`` for a subgroup given by its element indices in K (sorted)."""
    H_elems = sorted(H_elems)
    if B is None:
        B = algebra_from_group(K.subgroup(H_elems)[0], F)
    if A is None:
        A = algebra_from_group(K, F)
    M = F.zeros(A.dim, B.dim)
    for q, h in enumerate(H_elems):
        M[h, q] = F.one
    return AlgebraMorphism(B, A, M)


# ---------------------------------------------------------------------------
# free bases


@dataclass(frozen=True, eq=False)
class FreeBasis:
    """Left basis ``left`` (A = sum B s_j) and right basis ``right`` (A = sum t_j B)."""

    inclusion: AlgebraMorphism
    left: np.ndarray  # rows s_j
    right: np.ndarray  # rows t_j

    @property
    def rank(self) -> int:
        return self.left.shape[0]

    @cached_property
    def _left_inverse(self) -> np.ndarray:
        return la.inverse(self.inclusion.field, _block_matrix(self.inclusion, self.left, "left"))

    @cached_property
    def _right_inverse(self) -> np.ndarray:
        return la.inverse(self.inclusion.field, _block_matrix(self.inclusion, self.right, "right"))

    def left_coordinates(self, a: np.ndarray) -> np.ndarray:
        """``kappa`` with ``a = sum_j iota(kappa_j) s_j``; shape (..., rank, dim B)."""
        F = self.inclusion.field
        out = F.matmul(np.atleast_2d(a), self._left_inverse.T)
        return out.reshape(np.shape(a)[:-1] + (self.rank, self.inclusion.source.dim))

    def right_coordinates(self, a: np.ndarray) -> np.ndarray:
        """``k`` with ``a = sum_j t_j iota(k_j)``; shape (..., rank, dim B)."""
        F = self.inclusion.field
        out = F.matmul(np.atleast_2d(a), self._right_inverse.T)
        return out.reshape(np.shape(a)[:-1] + (self.rank, self.inclusion.source.dim))

    @cached_property
    def induction_table(self) -> np.ndarray:
        """``T[s, j, i]`` = right coordinate i of ``b_s t_j``, shape (dim A, r, r, dim B)."""
        a = self.inclusion.target
        prods = products(a, a.field.eye(a.dim), self.right).reshape(a.dim, self.rank, a.dim)
        return self.right_coordinates(prods.reshape(-1, a.dim)).reshape(a.dim, self.rank, self.rank, -1)

    @cached_property
    def coinduction_table(self) -> np.ndarray:
        """``C[s, j, i]`` = left coordinate i of ``s_j b_s``, shape (dim A, r, r, dim B)."""
        a = self.inclusion.target
        prods = products(a, self.left, a.field.eye(a.dim)).reshape(self.rank, a.dim, a.dim)
        prods = prods.transpose(1, 0, 2)  # (s, j, vec)
        return self.left_coordinates(prods.reshape(-1, a.dim)).reshape(a.dim, self.rank, self.rank, -1)


def _block_matrix(inc: AlgebraMorphism, elems: np.ndarray, side: str) -> np.ndarray:
    """Columns ``iota(e_q) s_j`` (left) or ``t_j iota(e_q)`` (right), indexed j-major."""
    a = inc.target
    imgs = inc.matrix.T  # rows iota(e_q)
    if elems.shape[0] == 0:
        return a.field.zeros(a.dim, 0)
    if side == "left":
        cols = products(a, imgs, elems).reshape(imgs.shape[0], elems.shape[0], a.dim).transpose(1, 0, 2)
    else:
        cols = products(a, elems, imgs).reshape(elems.shape[0], imgs.shape[0], a.dim)
    return np.ascontiguousarray(cols.reshape(-1, a.dim).T)


def _greedy_basis(inc: AlgebraMorphism, side: str, hints: Optional[np.ndarray], rng) -> np.ndarray:
    F = inc.field
    a = inc.target
    db = inc.source.dim
    cands = [] if hints is None else list(hints)
    cands += [a.basis_vector(i) for i in range(a.dim)]
    rng = rng or np.random.default_rng(0)
    cands += [F.random(rng, a.dim) for _ in range(4 * a.dim)]
    chosen: list[np.ndarray] = []
    span = F.zeros(0, a.dim)
    for v in cands:
        if span.shape[0] == a.dim:
            break
        if span.shape[0] and la.membership(F, v, span):
            continue
        trial = np.stack(chosen + [v])
        block = _block_matrix(inc, trial, side)
        if la.rank(F, block) == trial.shape[0] * db:
            chosen.append(v)
            span = la.image(F, block)
    if span.shape[0] != a.dim:
        raise NotFree(f"greedy {side} basis stalled at {span.shape[0]} of {a.dim} dimensions")
    return np.stack(chosen)


def free_basis(inc: AlgebraMorphism, hints: Optional[np.ndarray] = None, rng=None) -> FreeBasis:
    """Greedy left and right bases of A over B, trying ``hints`` and then standard vectors."""
    a, b = inc.target, inc.source
    if a.dim % b.dim:
        raise NotFree(f"dim A = {a.dim} is not a multiple of dim B = {b.dim}")
    left = _greedy_basis(inc, "left", hints, rng)
    right = _greedy_basis(inc, "right", hints, rng)
    if left.shape[0] * b.dim != a.dim or right.shape[0] * b.dim != a.dim:
        raise NotFree("free rank does not equal dim A / dim B")
    return FreeBasis(inc, left, right)


# ---------------------------------------------------------------------------
# Frobenius extension witnesses


@dataclass(frozen=True, eq=False)
class FrobeniusExtensionWitness:
    inclusion: AlgebraMorphism
    lam: np.ndarray  # (dim B, dim A), the bimodule map A -> B
    xs: np.ndarray  # rows
    ys: np.ndarray


def coset_witness(K, H_elems: Sequence[int], F, inc: Optional[AlgebraMorphism] = None) -> FrobeniusExtensionWitness:
    """Projection onto F[H] with the right coset representatives k_i (K = union of H k_i)
    as ``xs`` and their inverses as ``ys``."""
    H_elems = sorted(H_elems)
    inc = inc or group_inclusion(K, H_elems, F)
    A = inc.target
    lam = F.zeros(len(H_elems), A.dim)
    for q, h in enumerate(H_elems):
        lam[q, h] = F.one
    reps = right_coset_reps(K, H_elems)
    xs = np.stack([A.basis_vector(k) for k in reps])
    ys = np.stack([A.basis_vector(K.inverse[k]) for k in reps])
    return FrobeniusExtensionWitness(inc, lam, xs, ys)


def right_coset_reps(K, H_elems: Sequence[int]) -> list[int]:
    """First element of each coset ``H k`` in the group's element order."""
    seen, reps = set(), []
    for k in range(K.order):
        if k in seen:
            continue
        reps.append(k)
        seen.update(K.mul(h, k) for h in H_elems)
    return reps


def left_coset_reps(K, H_elems: Sequence[int]) -> list[int]:
    """First element of each coset ``k H`` (a transversal of K/H)."""
    seen, reps = set(), []
    for k in range(K.order):
        if k in seen:
            continue
        reps.append(k)
        seen.update(K.mul(k, h) for h in H_elems)
    return reps


def form_witness(inc: AlgebraMorphism, fa: FrobeniusData, fb: FrobeniusData,
                 basis: Optional[FreeBasis] = None) -> FrobeniusExtensionWitness:
    """Witness for an inclusion of symmetric Frobenius algebras.

    Λ is fixed by ``form_B(Λ(a) b) = form_A(a b)``; ``ys`` is a right free basis
    and each ``x_i`` is the element with ``Λ(x_i a)`` equal to the i-th right coordinate of a.
    """
    F = inc.field
    A, B = inc.target, inc.source
    basis = basis or free_basis(inc)
    # w[s, q] = form_A(b_s iota(e_q)); Λ(b_s) = G_B^{-T} w[s]
    w = F.tensordot(products(A, F.eye(A.dim), inc.matrix.T).reshape(A.dim, B.dim, A.dim), fa.form, 1)
    lam = F.matmul(la.inverse(F, fb.gram.T), w.T)  # (dim B, dim A)
    coords = basis.right_coordinates(F.eye(A.dim))  # (a, i, q)
    r = basis.rank
    # unknown x_i: Λ(x_i b_s) = coords[s, i]; Λ R_{b_s} x_i is linear in x_i
    eq = np.concatenate([F.matmul(lam, A.R[s]) for s in range(A.dim)], axis=0)  # (dim A * dim B, dim A)
    xs = []
    for i in range(r):
        rhs = coords[:, i, :].reshape(-1)
        x, _ = la.solve(F, eq, rhs)
        if x is None:
            raise NotFree("form does not induce a Frobenius extension on this basis")
        xs.append(x)
    return FrobeniusExtensionWitness(inc, lam, np.stack(xs), basis.right.copy())


def verify_witness(w: FrobeniusExtensionWitness) -> Report:
    """Bimodule property and both dual-basis identities on every basis element."""
    inc = w.inclusion
    F = inc.field
    A, B = inc.target, inc.source
    rep = Report("frobenius-extension")
    lam = w.lam
    iota = inc.matrix
    for q in range(B.dim):
        b_in_a = iota[:, q]
        if not np.array_equal(F.matmul(lam, F.tensordot(b_in_a, A.L, 1)), F.matmul(B.L[q], lam)):
            rep.fail(f"Λ is not left {B.labels[q]}-linear")
            return rep
        if not np.array_equal(F.matmul(lam, F.tensordot(b_in_a, A.R, 1)), F.matmul(B.R[q], lam)):
            rep.fail(f"Λ is not right {B.labels[q]}-linear")
            return rep
    if w.xs.shape != w.ys.shape:
        rep.fail("xs and ys have different lengths")
        return rep
    back = F.matmul(iota, lam)  # iota o Λ on A
    first = F.zeros(A.dim, A.dim)
    second = F.zeros(A.dim, A.dim)
    for x, y in zip(w.xs, w.ys):
        Lx, Ly = F.tensordot(x, A.L, 1), F.tensordot(y, A.L, 1)
        Rx, Ry = F.tensordot(x, A.R, 1), F.tensordot(y, A.R, 1)
        first = F.add(first, F.matmul(Ly, F.matmul(back, Lx)))  # a -> y Λ(x a)
        second = F.add(second, F.matmul(Rx, F.matmul(back, Ry)))  # a -> Λ(a y) x
    eye = F.eye(A.dim)
    for name, mat in (("sum y_i Λ(x_i a) = a", first), ("sum Λ(a y_i) x_i = a", second)):
        bad = np.flatnonzero(np.any(mat != eye, axis=0))
        if bad.size:
            rep.fail(f"{name} fails at a = {A.labels[bad[0]]}")
    return rep


# ---------------------------------------------------------------------------
# induction, coinduction, restriction


def restrict(inc: AlgebraMorphism, m: FDModule) -> FDModule:
    F = inc.field
    act = F.tensordot(inc.matrix.T, m.action, 1) if m.dim else F.zeros(inc.source.dim, 0, 0)
    return FDModule(inc.source, act, name=f"res({m.name})")


def induce(fb: FreeBasis, m: FDModule) -> FDModule:
    """``A (x)_B M`` on the carrier ``sum_i t_i (x) M`` (block i = t_i)."""
    F = m.field
    A = fb.inclusion.target
    r, n = fb.rank, m.dim
    if n == 0:
        return FDModule(A, F.zeros(A.dim, 0, 0), name=f"ind({m.name})")
    T = fb.induction_table  # (s, j, i, q)
    blocks = F.tensordot(T, m.action, 1)  # (s, j, i, n, n)
    act = blocks.transpose(0, 2, 3, 1, 4).reshape(A.dim, r * n, r * n)
    return FDModule(A, np.ascontiguousarray(act), name=f"ind({m.name})")


def induce_hom(fb: FreeBasis, phi: np.ndarray) -> np.ndarray:
    F = fb.inclusion.field
    return F.kron(F.eye(fb.rank), phi)


def coinduce(fb: FreeBasis, m: FDModule) -> FDModule:
    """``Hom_B(A, M)`` with ``(a f)(x) = f(x a)``, stored as ``(f(s_1), ..., f(s_r))``."""
    F = m.field
    A = fb.inclusion.target
    r, n = fb.rank, m.dim
    if n == 0:
        return FDModule(A, F.zeros(A.dim, 0, 0), name=f"coind({m.name})")
    C = fb.coinduction_table  # (s, j, i, q): left coordinate i of s_j b_s
    blocks = F.tensordot(C, m.action, 1)  # (s, j, i, n, n): block (j, i)
    act = blocks.transpose(0, 1, 3, 2, 4).reshape(A.dim, r * n, r * n)
    return FDModule(A, np.ascontiguousarray(act), name=f"coind({m.name})")


def ind_coind_iso(w: FrobeniusExtensionWitness, fb: FreeBasis, m: FDModule) -> ModuleHom:
    """``f -> sum_i y_i (x) f(x_i)`` from coinduced to induced module, checked bijective."""
    F = m.field
    r, n = fb.rank, m.dim
    ind, coind = induce(fb, m), coinduce(fb, m)
    ky = fb.right_coordinates(w.ys)  # (i, l, q)
    kx = fb.left_coordinates(w.xs)  # (i, j, q)
    rk = F.tensordot(ky, m.action, 1)  # (i, l, n, n)
    rx = F.tensordot(kx, m.action, 1)  # (i, j, n, n)
    # block (l, j) = sum_i rho(k_l(y_i)) rho(kappa_j(x_i))
    mat = F.tensordot(rk, rx, axes=([0, 3], [0, 2])).reshape(r * n, r * n)
    hom = ModuleHom(coind, ind, mat)
    if not is_intertwiner(coind, ind, mat):
        raise IsoFailure("coinduced-to-induced map is not A-linear")
    if not la.is_invertible(F, mat):
        raise IsoFailure("coinduced-to-induced map is not bijective")
    return hom
