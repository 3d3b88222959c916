"""Finite-dimensional left modules: homs, submodules, simplicity, projectivity,
free resolutions, Ext and the stable category at a single stage."""

from __future__ import annotations

import hashlib
import itertools
import threading
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import exactla as la
from .algcore import Algebra, FrobeniusData, Ideal


class AlgebraMismatch(ValueError):
    pass


class NotSubmodule(ValueError):
    pass


class NoFrobeniusData(ValueError):
    pass


class Inconclusive(RuntimeError):
    """A search ran out of budget without proving or disproving the claim."""


@dataclass(frozen=True, eq=False)
class FDModule:
    """Left module with ``action[i]`` the matrix of the basis element ``b_i``."""

    algebra: Algebra
    action: np.ndarray  # shape (dim A, n, n)
    name: str = ""

    def __post_init__(self):
        a = self.algebra
        if self.action.ndim != 3 or self.action.shape[0] != a.dim or self.action.shape[1] != self.action.shape[2]:
            raise la.DimensionMismatch(f"action of shape {self.action.shape} over an algebra of dim {a.dim}")
        a.field.check(self.action)

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    @property
    def field(self):
        return self.algebra.field

    def __repr__(self):
        return f"FDModule({self.name or '?'}, dim={self.dim}, over {self.algebra.name})"

    def rho(self, x: np.ndarray) -> np.ndarray:
        """Matrix of an algebra element acting on the module."""
        if self.dim == 0:
            return self.field.zeros(0, 0)
        return self.field.tensordot(x, self.action, 1)

    @cached_property
    def generator_action(self) -> np.ndarray:
        if self.dim == 0:
            return self.field.zeros(0, 0, 0)
        return self.field.tensordot(self.algebra.generators, self.action, 1)

    def content_key(self) -> str:
        h = hashlib.sha256()
        a = self.algebra
        for arr in (a.c, a.unit, a.aug, self.action):
            h.update(repr(arr.shape).encode())
            h.update(",".join(str(a.field.format(x)) for x in arr.reshape(-1)).encode())
        h.update(a.field.name.encode())
        return h.hexdigest()


def validate_module(m: FDModule) -> list[str]:
    """Violated module axioms, empty when the action is a representation."""
    F = m.field
    a = m.algebra
    problems = []
    n = m.dim
    if n == 0:
        return problems
    if not np.array_equal(m.rho(a.unit), F.eye(n)):
        problems.append("unit does not act as the identity")
    act = m.action
    lhs = F.tensordot(act, act, axes=([2], [1])).transpose(0, 2, 1, 3)  # rho_i rho_j, (i, j, r, s)
    rhs = F.tensordot(a.c, act, 1)  # sum_k c_ijk rho_k
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        i, j = bad[0][:2]
        problems.append(f"rho({a.labels[i]}) rho({a.labels[j]}) != rho({a.labels[i]}*{a.labels[j]})")
    return problems


def validated(m: FDModule) -> FDModule:
    problems = validate_module(m)
    if problems:
        raise ValueError("invalid module: " + "; ".join(problems))
    return m


@dataclass(frozen=True, eq=False)
class ModuleHom:
    source: FDModule
    target: FDModule
    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise la.DimensionMismatch("hom matrix shape does not match the modules")

    def is_intertwiner(self) -> bool:
        return is_intertwiner(self.source, self.target, self.matrix)

    def is_bijective(self) -> bool:
        return la.is_invertible(self.source.field, self.matrix)


def is_intertwiner(m: FDModule, n: FDModule, f: np.ndarray) -> bool:
    F = m.field
    if m.dim == 0 or n.dim == 0:
        return True
    left = F.tensordot(n.action, f, 1)  # rho_N(b) f
    right = F.tensordot(f, m.action, axes=([1], [1])).transpose(1, 0, 2)  # f rho_M(b)
    return bool(np.array_equal(left, right))


# ---------------------------------------------------------------------------
# constructions


def regular_module(a: Algebra) -> FDModule:
    return FDModule(a, a.L.copy(), name="regular")


def trivial_module(a: Algebra) -> FDModule:
    return FDModule(a, a.aug.reshape(-1, 1, 1).copy(), name="k")


def zero_module(a: Algebra) -> FDModule:
    return FDModule(a, a.field.zeros(a.dim, 0, 0), name="0")


def direct_sum(ms: Sequence[FDModule]) -> FDModule:
    ms = list(ms)
    if not ms:
        raise ValueError("direct_sum of an empty list; use zero_module")
    a = ms[0].algebra
    if any(m.algebra is not a for m in ms):
        raise AlgebraMismatch("direct sum of modules over different algebras")
    n = sum(m.dim for m in ms)
    act = a.field.zeros(a.dim, n, n)
    o = 0
    for m in ms:
        act[:, o:o + m.dim, o:o + m.dim] = m.action
        o += m.dim
    return FDModule(a, act, name="+".join(m.name or "?" for m in ms))


def free_module(a: Algebra, n: int) -> FDModule:
    if n == 0:
        return zero_module(a)
    m = direct_sum([regular_module(a)] * n)
    return FDModule(a, m.action, name=f"A^{n}")


def ideal_module(l: Ideal) -> FDModule:
    """A left ideal as a submodule of the regular module."""
    return submodule(regular_module(l.algebra), l.basis)[0]


def _same_algebra(m: FDModule, n: FDModule) -> None:
    if m.algebra is not n.algebra:
        raise AlgebraMismatch("modules over different algebras")


# ---------------------------------------------------------------------------
# homomorphisms


def hom_space(m: FDModule, n: FDModule) -> np.ndarray:
    """Basis of Hom_A(m, n) as an array of shape (k, dim n, dim m), canonical order."""
    _same_algebra(m, n)
    F = m.field
    p, q = n.dim, m.dim
    if p == 0 or q == 0:
        return F.zeros(0, p, q)
    gm, gn = m.generator_action, n.generator_action
    if gm.shape[0] == 0:
        return F.eye(p * q).reshape(-1, p, q)
    Ip, Iq = F.eye(p), F.eye(q)
    # row-major vec(f): rho_N f -> kron(rho_N, I), f rho_M -> kron(I, rho_M^T)
    eqs = [F.sub(F.kron(gn[t], Iq), F.kron(Ip, gm[t].T)) for t in range(gm.shape[0])]
    ker = la.kernel(F, np.concatenate(eqs, axis=0))
    return ker.reshape(-1, p, q)


def end_space(m: FDModule) -> np.ndarray:
    return hom_space(m, m)


def combine(F, basis: np.ndarray, coeffs) -> np.ndarray:
    """Linear combination of the matrices in ``basis`` (first axis)."""
    coeffs = np.asarray(coeffs, dtype=basis.dtype) if F.p else F.array(list(coeffs))
    return F.tensordot(coeffs, basis, 1)


# ---------------------------------------------------------------------------
# submodules and quotients


def submodule_generated(m: FDModule, vectors) -> np.ndarray:
    """Canonical basis of the submodule spanned by all ``rho(b_i) v``."""
    F = m.field
    vectors = np.asarray(vectors).reshape(-1, m.dim)
    if vectors.shape[0] == 0 or m.dim == 0:
        return F.zeros(0, m.dim)
    imgs = F.tensordot(m.action, vectors.T, 1)  # (i, n, k)
    return la.row_space(F, imgs.transpose(0, 2, 1).reshape(-1, m.dim), m.dim)


def is_submodule(m: FDModule, basis: np.ndarray) -> bool:
    if basis.shape[0] == 0:
        return True
    return la.contains(m.field, basis, submodule_generated(m, basis))


def submodule(m: FDModule, basis: np.ndarray) -> tuple[FDModule, np.ndarray]:
    """Module on the span of ``basis`` rows, with the inclusion matrix (dim m x k)."""
    F = m.field
    basis = la.row_space(F, basis, m.dim)
    if not is_submodule(m, basis):
        raise NotSubmodule("subspace is not invariant under the action")
    k = basis.shape[0]
    if k == 0:
        return zero_module(m.algebra), F.zeros(m.dim, 0)
    piv = la.pivots_of(F, basis)
    imgs = F.tensordot(m.action, basis.T, 1)  # (i, n, k): rho(b_i) basis_j as columns
    act = imgs[:, piv, :]  # RREF coordinates are the pivot entries
    return FDModule(m.algebra, np.ascontiguousarray(act), name=f"sub({m.name})"), basis.T.copy()


def quotient_module(m: FDModule, sub: np.ndarray) -> tuple[FDModule, np.ndarray]:
    """Quotient ``m / sub`` and the projection matrix, in complement coordinates."""
    F = m.field
    sub = la.row_space(F, sub, m.dim)
    if not is_submodule(m, sub):
        raise NotSubmodule("subspace is not invariant under the action")
    if sub.shape[0] == 0:
        return m, F.eye(m.dim)
    proj, comp = la.quotient_projection(F, sub)
    if not comp:
        return zero_module(m.algebra), F.zeros(0, m.dim)
    act = F.tensordot(proj, m.action[:, :, comp], axes=([1], [1])).transpose(1, 0, 2)  # proj rho(b) on complement
    return FDModule(m.algebra, np.ascontiguousarray(act), name=f"{m.name}/sub"), proj


def image_module(hom: ModuleHom) -> np.ndarray:
    return la.image(hom.source.field, hom.matrix)


def kernel_module(hom: ModuleHom) -> tuple[FDModule, np.ndarray]:
    return submodule(hom.source, la.kernel(hom.source.field, hom.matrix))


def radical_submodule(m: FDModule) -> np.ndarray:
    """``J M`` for the Jacobson radical J of the algebra."""
    F = m.field
    J = m.algebra.radical.basis
    if J.shape[0] == 0 or m.dim == 0:
        return F.zeros(0, m.dim)
    mats = F.tensordot(J, m.action, 1)  # (r, n, n)
    return la.row_space(F, mats.transpose(0, 2, 1).reshape(-1, m.dim), m.dim)


def socle_submodule(m: FDModule) -> np.ndarray:
    """``{v : J v = 0}``, the socle of the module."""
    F = m.field
    J = m.algebra.radical.basis
    if J.shape[0] == 0 or m.dim == 0:
        return F.eye(m.dim)
    mats = F.tensordot(J, m.action, 1)
    return la.kernel(F, mats.reshape(-1, m.dim))


# ---------------------------------------------------------------------------
# simplicity


@dataclass(frozen=True)
class Simple:
    pass


@dataclass(frozen=True, eq=False)
class NotSimple:
    witness: np.ndarray  # basis of a proper nonzero submodule


@dataclass(frozen=True)
class Unknown:
    reason: str = ""


def _proper(m: FDModule, basis: np.ndarray) -> bool:
    return 0 < basis.shape[0] < m.dim


def is_simple(m: FDModule, rng: Optional[np.random.Generator] = None, trials: int = 64):
    """Decide simplicity, returning Simple, NotSimple(witness) or Unknown.

    A nonzero ``J M`` is a proper submodule.  Otherwise ``M`` is semisimple and
    simple exactly when ``End(M)`` is a division algebra.
    """
    F = m.field
    if m.dim == 0:
        return NotSimple(F.zeros(0, 0))
    if m.dim == 1:
        return Simple()
    jm = radical_submodule(m)
    if jm.shape[0]:
        return NotSimple(jm)
    E = end_space(m)
    if E.shape[0] == 1:
        return Simple()
    rng = rng or np.random.default_rng(0)
    if F.p:
        return _division_test_finite(m, E, rng, trials)
    return _division_test_rational(m, E, rng, trials)


def _kernel_witness(m: FDModule, phi: np.ndarray):
    ker = la.kernel(m.field, phi)
    if _proper(m, ker):
        return NotSimple(ker)
    return None


def _division_test_finite(m: FDModule, E: np.ndarray, rng, trials: int):
    F = m.field
    p = F.p
    k = E.shape[0]
    commutative = all(
        np.array_equal(F.matmul(E[i], E[j]), F.matmul(E[j], E[i])) for i in range(k) for j in range(i + 1, k)
    )
    if commutative:
        # Berlekamp: E is a field iff x -> x^p - x has a 1-dimensional kernel on E
        flat = E.reshape(k, -1)
        images = []
        for i in range(k):
            x = E[i]
            xp = F.eye(m.dim)
            for _ in range(p):
                xp = F.matmul(xp, x)
            images.append(F.sub(xp, x).reshape(-1))
        # matrix of Frob - id in E-coordinates
        coords = la.coordinates(F, flat, np.stack(images))
        fixed = la.left_kernel(F, coords)
        if fixed.shape[0] == 1:
            return Simple()
        for row in fixed:
            x = combine(F, E, row)
            for a in range(p):
                w = _kernel_witness(m, F.sub(x, F.scal(a, F.eye(m.dim))))
                if w:
                    return w
        return Unknown("fixed points of Frobenius gave no zero divisor")
    for i in range(k):
        for a in range(p):
            w = _kernel_witness(m, F.sub(E[i], F.scal(a, F.eye(m.dim))))
            if w:
                return w
    for _ in range(trials):
        w = _kernel_witness(m, combine(F, E, F.random(rng, k)))
        if w:
            return w
    return Unknown("no zero divisor found in a noncommutative endomorphism ring")


def _division_test_rational(m: FDModule, E: np.ndarray, rng, trials: int):
    import sympy

    F = m.field
    k = E.shape[0]
    x = sympy.Symbol("x")
    cands = [E[i] for i in range(k)] + [combine(F, E, F.random(rng, k)) for _ in range(trials)]
    commutative = all(
        np.array_equal(F.matmul(E[i], E[j]), F.matmul(E[j], E[i])) for i in range(k) for j in range(i + 1, k)
    )
    for phi in cands:
        w = _kernel_witness(m, phi)
        if w:
            return w
        poly = _minimal_polynomial(F, phi, x)
        factors = sympy.factor_list(poly, x)[1]
        if len(factors) > 1 or factors[0][1] > 1:
            f = factors[0][0]
            w = _kernel_witness(m, _poly_at(F, sympy.Poly(f, x), phi))
            if w:
                return w
        elif commutative and sympy.degree(poly, x) == k:
            return Simple()  # E = Q(phi) is a field
    return Unknown("rational endomorphism ring not decided")


def _minimal_polynomial(F, phi: np.ndarray, x):
    """Minimal polynomial of a rational matrix as a sympy expression in ``x``."""
    import sympy

    n = phi.shape[0]
    powers = [F.eye(n).reshape(-1)]
    cur = F.eye(n)
    while True:
        cur = F.matmul(cur, phi)
        sol, _ = la.solve(F, np.stack(powers).T, cur.reshape(-1))
        if sol is not None:
            terms = [sympy.Rational(int(c.numerator), int(c.denominator)) * x**i for i, c in enumerate(sol)]
            return sympy.expand(x ** len(powers) - sum(terms))
        powers.append(cur.reshape(-1))


def _poly_at(F, poly, phi: np.ndarray) -> np.ndarray:
    from fractions import Fraction

    n = phi.shape[0]
    out = F.zeros(n, n)
    for c in poly.all_coeffs():
        c = Fraction(int(c.p), int(c.q))
        out = F.add(F.matmul(out, phi), F.scal(c, F.eye(n)))
    return out


# ---------------------------------------------------------------------------
# free covers, projectivity, resolutions


@dataclass(frozen=True, eq=False)
class FreeCover:
    """Epimorphism ``A^g -> M`` sending the k-th free generator to ``generators[k]``."""

    module: FDModule
    generators: np.ndarray  # (g, dim M)
    free: FDModule
    matrix: np.ndarray  # (dim M, g * dim A), generator-major

    @property
    def rank(self) -> int:
        return self.generators.shape[0]

    def hom(self) -> ModuleHom:
        return ModuleHom(self.free, self.module, self.matrix)


def top_complement(m: FDModule) -> list[int]:
    return la.complement_columns(m.field, radical_submodule(m)) if m.dim else []


def choose_generators(m: FDModule, extra: Optional[np.ndarray] = None) -> np.ndarray:
    """Greedy generating set, trying standard vectors outside ``J M`` first."""
    F = m.field
    n = m.dim
    order = top_complement(m)
    order += [i for i in range(n) if i not in order]
    cands = [F.unit_vector(n, i) for i in order]
    if extra is not None:
        cands = list(extra) + cands
    gens: list[np.ndarray] = []
    span = F.zeros(0, n)
    for v in cands:
        if span.shape[0] == n:
            break
        if not la.membership(F, v, span):
            gens.append(v)
            span = submodule_generated(m, np.stack(gens))
    return np.stack(gens) if gens else F.zeros(0, n)


def free_cover(m: FDModule, generators: Optional[np.ndarray] = None) -> FreeCover:
    F = m.field
    a = m.algebra
    gens = choose_generators(m) if generators is None else generators
    g = gens.shape[0]
    if g == 0:
        return FreeCover(m, gens, zero_module(a), F.zeros(m.dim, 0))
    cols = F.tensordot(m.action, gens.T, 1)  # (i, n, k): rho(b_i) m_k
    matrix = np.ascontiguousarray(cols.transpose(1, 2, 0).reshape(m.dim, g * a.dim))
    if la.rank(F, matrix) != m.dim:
        raise ValueError("chosen generators do not generate the module")
    return FreeCover(m, gens, free_module(a, g), matrix)


def is_projective(m: FDModule) -> tuple[bool, Optional[ModuleHom]]:
    """Projectivity via a splitting of the free cover; returns the splitting when it exists."""
    F = m.field
    if m.dim == 0:
        return True, None
    cov = free_cover(m)
    H = hom_space(m, cov.free)  # (k, g d, n)
    if H.shape[0] == 0:
        return False, None
    comps = F.tensordot(H, cov.matrix, axes=([1], [1])).transpose(0, 2, 1)  # p o h_k, (k, n, n)
    coeff, _ = la.solve(F, comps.reshape(H.shape[0], -1).T, F.eye(m.dim).reshape(-1))
    if coeff is None:
        return False, None
    s = combine(F, H, coeff)
    return True, ModuleHom(m, cov.free, s)


@dataclass(frozen=True, eq=False)
class Resolution:
    """``F_s -> ... -> F_0 -> M``; ``images[i][k]`` is the image of generator k of F_i in F_{i-1}
    (a tuple of algebra elements) and ``differentials[i]`` the matrix, with F_{-1} = M."""

    module: FDModule
    ranks: list[int]
    differentials: list[np.ndarray]
    images: list[np.ndarray]  # images[i] has shape (g_i, g_{i-1} or 1, dim A) for i >= 1

    def is_exact(self) -> bool:
        F = self.module.field
        d = self.differentials
        if la.rank(F, d[0]) != self.module.dim:
            return False
        for i in range(1, len(d)):
            ker = la.kernel(F, d[i - 1])
            img = la.image(F, d[i]) if d[i].shape[1] else F.zeros(0, d[i].shape[0])
            if not la.same_subspace(F, ker, img) and not (ker.shape[0] == 0 and img.shape[0] == 0):
                return False
        return True


_RES_CACHE: dict = {}
_RES_LOCK = threading.Lock()


def free_resolution(m: FDModule, length: int) -> Resolution:
    """Minimal-ish free resolution with differentials up to ``F_length``."""
    key = (m.content_key(), length)
    with _RES_LOCK:
        hit = _RES_CACHE.get(key)
    if hit is not None and hit.module.algebra is m.algebra:
        return hit
    res = _build_resolution(m, length)
    with _RES_LOCK:
        _RES_CACHE[key] = res
    return res


def _build_resolution(m: FDModule, length: int) -> Resolution:
    F = m.field
    a = m.algebra
    d = a.dim
    cov = free_cover(m)
    ranks = [cov.rank]
    diffs = [cov.matrix]
    images = [F.zeros(cov.rank, 1, d)]
    current = cov
    for _ in range(length):
        kerb = la.kernel(F, current.matrix)
        g_prev = current.rank
        if kerb.shape[0] == 0:
            ranks.append(0)
            diffs.append(F.zeros(g_prev * d, 0))
            images.append(F.zeros(0, g_prev, d))
            current = FreeCover(zero_module(a), F.zeros(0, 0), zero_module(a), F.zeros(0, 0))
            continue
        kmod, incl = submodule(current.free, kerb)
        kcov = free_cover(kmod)
        # generators of the kernel, written in the ambient free module
        gens_amb = F.matmul(incl, kcov.generators.T).T if kcov.rank else F.zeros(0, g_prev * d)
        diff = F.matmul(incl, kcov.matrix)
        ranks.append(kcov.rank)
        diffs.append(diff)
        images.append(gens_amb.reshape(kcov.rank, g_prev, d))
        current = FreeCover(current.free, gens_amb, free_module(a, kcov.rank), diff)
    return Resolution(m, ranks, diffs, images)


def _dual_differential(n: FDModule, images: np.ndarray, g_prev: int) -> np.ndarray:
    """Matrix of Hom(F_{i-1}, N) = N^{g_prev} -> Hom(F_i, N) = N^{g_i}."""
    F = n.field
    g = images.shape[0]
    p = n.dim
    out = F.zeros(g * p, g_prev * p)
    for k in range(g):
        for j in range(g_prev):
            out[k * p:(k + 1) * p, j * p:(j + 1) * p] = n.rho(images[k, j])
    return out


def ext(m: FDModule, n: FDModule, max_degree: int) -> list[int]:
    """``[dim Ext^i(m, n) for i in 0..max_degree]`` from a free resolution of m."""
    _same_algebra(m, n)
    F = m.field
    res = free_resolution(m, max_degree + 1)
    p = n.dim
    duals = [None] + [_dual_differential(n, res.images[i], res.ranks[i - 1]) for i in range(1, max_degree + 2)]
    dims = []
    for i in range(max_degree + 1):
        cochains = res.ranks[i] * p
        nxt = duals[i + 1]
        ker = cochains - (la.rank(F, nxt) if nxt.size else 0)
        im = la.rank(F, duals[i]) if i > 0 and duals[i].size else 0
        dims.append(ker - im)
    return dims


# ---------------------------------------------------------------------------
# stable category


@dataclass(frozen=True, eq=False)
class StableHom:
    dim: int
    hom: np.ndarray  # basis of Hom(M, N)
    phom: np.ndarray  # basis (flattened) of maps factoring through a free module
    representatives: np.ndarray  # hom-space elements spanning a complement of PHom


def projective_homs(m: FDModule, n: FDModule) -> np.ndarray:
    """Flattened basis of ``{p o h : h in Hom(M, F)}`` for the free cover ``p: F -> N``."""
    F = m.field
    if m.dim == 0 or n.dim == 0:
        return F.zeros(0, n.dim * m.dim)
    cov = free_cover(n)
    H = hom_space(m, cov.free)
    if H.shape[0] == 0:
        return F.zeros(0, n.dim * m.dim)
    comps = F.tensordot(H, cov.matrix, axes=([1], [1])).transpose(0, 2, 1)
    return la.row_space(F, comps.reshape(H.shape[0], -1), n.dim * m.dim)


def stable_hom(m: FDModule, n: FDModule) -> StableHom:
    _same_algebra(m, n)
    F = m.field
    H = hom_space(m, n)
    flat = H.reshape(H.shape[0], n.dim * m.dim)
    P = projective_homs(m, n)
    reps = []
    span = P
    for f in flat:
        if not la.membership(F, f, span):
            reps.append(f)
            span = la.sum_subspace(F, span, f.reshape(1, -1))
    R = np.stack(reps).reshape(-1, n.dim, m.dim) if reps else F.zeros(0, n.dim, m.dim)
    return StableHom(H.shape[0] - P.shape[0], H, P, R)


def higman_trace(fd: FrobeniusData, m: FDModule, n: FDModule, f: np.ndarray) -> np.ndarray:
    """``sum_i rho_N(v_i) f rho_M(u_i)`` for dual bases with form(u_i v_j) = δ_ij."""
    F = m.field
    out = F.zeros(n.dim, m.dim)
    for u, v in fd.dual_pairs():
        out = F.add(out, F.matmul(F.matmul(n.rho(v), f), m.rho(u)))
    return out


def omega(m: FDModule) -> FDModule:
    """Syzygy: kernel of the free cover."""
    cov = free_cover(m)
    mod, _ = submodule(cov.free, la.kernel(m.field, cov.matrix))
    return FDModule(m.algebra, mod.action, name=f"Omega({m.name})")


def free_embedding(m: FDModule, fd: Optional[FrobeniusData]) -> tuple[FDModule, np.ndarray]:
    """Injective hom ``M -> A^h`` with h = dim soc(M), built from the Frobenius pairing.

    Each coordinate functional φ picked on the socle gives ``m -> x`` with
    ``form(b_i x) = φ(b_i m)``, which is A-linear.
    """
    if fd is None:
        raise NoFrobeniusData("cosyzygy needs a Frobenius form on the algebra")
    F = m.field
    a = m.algebra
    soc = socle_submodule(m)
    coords = la.pivots_of(F, soc)
    h = len(coords)
    ginv = fd.gram_inverse
    blocks = []
    for k in coords:
        # column s of the block: G^{-1} [ (rho(b_i) e_s)_k ]_i
        vals = m.action[:, k, :]  # (i, s)
        blocks.append(F.matmul(ginv, vals))
    j = np.concatenate(blocks, axis=0) if blocks else F.zeros(0, m.dim)
    target = free_module(a, h)
    if not is_intertwiner(m, target, j) or la.rank(F, j) != m.dim:
        raise AssertionError("Frobenius embedding failed to be an injective hom")
    return target, j


def mho(m: FDModule, fd: Optional[FrobeniusData]) -> FDModule:
    """Cosyzygy: cokernel of the Frobenius embedding into a free module."""
    target, j = free_embedding(m, fd)
    q, _ = quotient_module(target, la.image(m.field, j))
    return FDModule(m.algebra, q.action, name=f"Mho({m.name})")


def isomorphism(m: FDModule, n: FDModule, rng=None, trials: int = 200,
                exhaustive_limits: Optional[dict] = None) -> Optional[np.ndarray]:
    """An invertible element of Hom(m, n), or None when the search proves there is none.

    Raises :class:`Inconclusive` when neither is established.
    """
    F = m.field
    if m.dim != n.dim:
        return None
    if m.dim == 0:
        return F.zeros(0, 0)
    H = hom_space(m, n)
    k = H.shape[0]
    if k == 0:
        return None
    rng = rng or np.random.default_rng(0)
    for f in H:
        if la.is_invertible(F, f):
            return f
    for _ in range(trials):
        f = combine(F, H, F.random(rng, k))
        if la.is_invertible(F, f):
            return f
    limits = exhaustive_limits if exhaustive_limits is not None else {2: 12, 3: 8}
    if F.p in limits and k <= limits[F.p]:
        for coeffs in itertools.product(range(F.p), repeat=k):
            f = combine(F, H, list(coeffs))
            if la.is_invertible(F, f):
                return f
        return None
    raise Inconclusive(f"no isomorphism among {trials} random homs (dim Hom = {k})")


def is_isomorphic(m: FDModule, n: FDModule, **kw) -> bool:
    return isomorphism(m, n, **kw) is not None


def strip_projective(m: FDModule, rng=None, trials: int = 64) -> tuple[FDModule, int]:
    """Remove projective summands by Fitting splits of non-nilpotent maps that factor
    through a free module.  Returns the remaining core and the stripped dimension."""
    F = m.field
    rng = rng or np.random.default_rng(0)
    stripped = 0
    while m.dim:
        P = projective_homs(m, m).reshape(-1, m.dim, m.dim)
        if P.shape[0] == 0:
            break
        phi = None
        cands = list(P) + [combine(F, P, F.random(rng, P.shape[0])) for _ in range(trials)]
        for c in cands:
            if not la.nilpotent(F, c):
                phi = c
                break
        if phi is None:
            if _nilpotent_span(F, P):
                break
            raise Inconclusive("maps through projectives form a non-nilpotent ideal but no witness was found")
        power = phi
        for _ in range(m.dim):
            power = F.matmul(power, phi)
        ker = la.kernel(F, power)
        stripped += m.dim - ker.shape[0]
        m = submodule(m, ker)[0]
    return m, stripped


def _nilpotent_span(F, mats: np.ndarray) -> bool:
    n = mats.shape[1]
    span = la.row_space(F, mats.reshape(mats.shape[0], n * n), n * n)
    cur = span
    for _ in range(n + 1):
        if cur.shape[0] == 0:
            return True
        prods = F.tensordot(cur.reshape(-1, n, n), span.reshape(-1, n, n), axes=([2], [1]))
        prods = prods.transpose(0, 2, 1, 3).reshape(-1, n * n)
        nxt = la.row_space(F, prods, n * n)
        if nxt.shape[0] == cur.shape[0] and la.same_subspace(F, nxt, cur):
            return False
        cur = nxt
    return cur.shape[0] == 0


def stably_isomorphic(m: FDModule, n: FDModule, rng=None, trials: int = 200) -> bool:
    """Isomorphism after stripping projective summands from both sides."""
    _same_algebra(m, n)
    if m.algebra.radical.dim == 0:
        return True
    rng = rng or np.random.default_rng(0)
    cm, _ = strip_projective(m, rng)
    cn, _ = strip_projective(n, rng)
    return isomorphism(cm, cn, rng=rng, trials=trials) is not None


# ---------------------------------------------------------------------------
# random modules for experiments


def random_module(a: Algebra, rng: np.random.Generator, max_dim: int = 8) -> FDModule:
    """A seeded random module: cyclic submodule, cyclic quotient or small sum of those."""
    F = a.field
    reg = regular_module(a)
    for _ in range(50):
        kind = int(rng.integers(0, 3))
        v = F.random(rng, a.dim)
        if F.is_zero(v):
            continue
        sub = submodule_generated(reg, v.reshape(1, -1))
        if kind == 0 and sub.shape[0] <= max_dim:
            return submodule(reg, sub)[0]
        if kind == 1 and 0 < a.dim - sub.shape[0] <= max_dim:
            return quotient_module(reg, sub)[0]
        if kind == 2:
            parts = []
            for _ in range(2):
                w = F.random(rng, a.dim)
                s = submodule_generated(reg, w.reshape(1, -1))
                if 0 < a.dim - s.shape[0]:
                    parts.append(quotient_module(reg, s)[0])
            if parts and sum(p.dim for p in parts) <= max_dim:
                return direct_sum(parts)
    return trivial_module(a)
