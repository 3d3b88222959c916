"""Finite-dimensional unital augmented algebras given by structure constants.

``c[i, j, k]`` is the coefficient of ``b_k`` in ``b_i b_j``.  Elements are
coordinate vectors; ``L[i]`` and ``R[i]`` are the matrices of left and right
multiplication by ``b_i`` acting on column vectors.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import exactla as la
from .exactla import Field


class AlgebraError(ValueError):
    pass


class DegenerateForm(AlgebraError):
    pass


class NotSymmetric(AlgebraError):
    pass


class NotAnIdeal(AlgebraError):
    pass


class NotMinimal(AlgebraError):
    pass


class AlgorithmInapplicable(AlgebraError):
    pass


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    TWO_SIDED = "two-sided"


@dataclass
class Report:
    """Outcome of a validation: ``ok`` plus human-readable failures."""

    name: str
    failures: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def __bool__(self):
        return self.ok


@dataclass(frozen=True, eq=False)
class Algebra:
    field: Field
    c: np.ndarray
    unit: np.ndarray
    aug: np.ndarray
    labels: tuple[str, ...]
    name: str = ""

    def __post_init__(self):
        d = len(self.labels)
        if d < 1:
            raise AlgebraError("an algebra needs a positive dimension")
        if self.c.shape != (d, d, d):
            raise la.DimensionMismatch(f"structure constants {self.c.shape} for dim {d}")
        if self.unit.shape != (d,) or self.aug.shape != (d,):
            raise la.DimensionMismatch("unit and augmentation must be vectors of length dim")
        for arr in (self.c, self.unit, self.aug):
            self.field.check(arr)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __repr__(self):
        return f"Algebra({self.name or '?'}, dim={self.dim}, {self.field.name})"

    @classmethod
    def build(cls, field: Field, c, unit, aug, labels=None, name="") -> "Algebra":
        c = field.array(c)
        d = c.shape[0]
        labels = tuple(labels) if labels is not None else tuple(f"b{i}" for i in range(d))
        return cls(field, c, field.array(unit), field.array(aug), labels, name)

    @cached_property
    def L(self) -> np.ndarray:
        return np.ascontiguousarray(self.c.transpose(0, 2, 1))

    @cached_property
    def R(self) -> np.ndarray:
        return np.ascontiguousarray(self.c.transpose(1, 2, 0))

    def basis_vector(self, i: int) -> np.ndarray:
        return self.field.unit_vector(self.dim, i)

    def element(self, coeffs: dict | Sequence) -> np.ndarray:
        """Vector from a label->coefficient mapping or a coefficient list."""
        F = self.field
        if isinstance(coeffs, dict):
            v = F.zeros(self.dim)
            for lab, x in coeffs.items():
                v[self.labels.index(lab)] = F(x)
            return v
        return F.array(list(coeffs))

    def format_element(self, v: np.ndarray) -> str:
        terms = []
        for lab, x in zip(self.labels, v):
            if x == 0:
                continue
            s = str(self.field.format(x))
            terms.append(lab if s == "1" else f"{s}*{lab}")
        return " + ".join(terms) or "0"

    @cached_property
    def generators(self) -> np.ndarray:
        """Basis vectors, chosen greedily in basis order, that generate the algebra."""
        F = self.field
        gens: list[np.ndarray] = []
        span = generated_subalgebra(self, F.zeros(0, self.dim))
        for i in range(self.dim):
            if span.shape[0] == self.dim:
                break
            e = self.basis_vector(i)
            if not la.membership(F, e, span):
                gens.append(e)
                span = generated_subalgebra(self, np.stack(gens))
        return np.stack(gens) if gens else F.zeros(0, self.dim)

    @cached_property
    def radical(self) -> "Ideal":
        return radical(self)

    @cached_property
    def augmentation_ideal(self) -> np.ndarray:
        return la.kernel(self.field, self.aug.reshape(1, -1))


# ---------------------------------------------------------------------------
# constructors


def algebra_from_group(G, F: Field) -> Algebra:
    """Group algebra ``F[G]`` with basis the group elements and ε(g) = 1."""
    n = G.order
    c = np.zeros((n, n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            c[a, b, G.mul(a, b)] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[G.identity] = 1
    return Algebra.build(F, c, unit, np.ones(n, dtype=np.int64), G.labels, name=f"{F.name}[{G.name}]")


def ground_field(F: Field) -> Algebra:
    return Algebra.build(F, [[[1]]], [1], [1], ["1"], name=F.name)


def truncated_polynomial(F: Field, n: int) -> Algebra:
    """``F[x]/(x^n)`` with ε(x) = 0."""
    c = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n - i):
            c[i, j, i + j] = 1
    labels = ["1"] + [("x" if i == 1 else f"x^{i}") for i in range(1, n)]
    return Algebra.build(F, c, F.unit_vector(n, 0), F.unit_vector(n, 0), labels, name=f"{F.name}[x]/x^{n}")


def dual_numbers_2(F: Field) -> Algebra:
    """``F[x, y]/(x^2, y^2)`` on the basis 1, x, y, xy."""
    mons = [(0, 0), (1, 0), (0, 1), (1, 1)]
    c = np.zeros((4, 4, 4), dtype=np.int64)
    for i, a in enumerate(mons):
        for j, b in enumerate(mons):
            s = (a[0] + b[0], a[1] + b[1])
            if s in mons:
                c[i, j, mons.index(s)] = 1
    return Algebra.build(F, c, F.unit_vector(4, 0), F.unit_vector(4, 0), ["1", "x", "y", "xy"],
                         name=f"{F.name}[x,y]/(x^2,y^2)")


def _matrix_units(n: int) -> np.ndarray:
    d = n * n
    c = np.zeros((d, d, d), dtype=np.int64)
    for (i, j), (k, l) in itertools.product(itertools.product(range(n), repeat=2), repeat=2):
        if j == k:
            c[i * n + j, k * n + l, i * n + l] = 1
    return c


def upper_triangular(F: Field) -> Algebra:
    """2x2 upper triangular matrices on e11, e12, e22, augmented by the (1,1) entry."""
    full = _matrix_units(2)
    keep = [0, 1, 3]
    c = full[np.ix_(keep, keep, keep)]
    return Algebra.build(F, c, [1, 0, 1], [1, 0, 0], ["e11", "e12", "e22"], name=f"T2({F.name})")


def matrix_algebra_times_field(F: Field, n: int = 2) -> Algebra:
    """``F x M_n(F)`` augmented by the projection to the first factor."""
    k = ground_field(F)
    d = n * n
    m = Algebra.build(F, _matrix_units(n), np.eye(n, dtype=np.int64).reshape(-1),
                      np.zeros(d, dtype=np.int64), [f"e{i + 1}{j + 1}" for i in range(n) for j in range(n)])
    return product_algebra(k, m, name=f"{F.name}xM{n}({F.name})")


def product_algebra(a: Algebra, b: Algebra, name: str = "") -> Algebra:
    """``a x b`` with componentwise product and augmentation ``ε_a`` on the first factor."""
    F = a.field
    if b.field != F:
        raise la.FieldMismatch("product of algebras over different fields")
    da, db = a.dim, b.dim
    d = da + db
    c = F.zeros(d, d, d)
    c[:da, :da, :da] = a.c
    c[da:, da:, da:] = b.c
    unit = np.concatenate([a.unit, b.unit])
    aug = np.concatenate([a.aug, F.zeros(db)])
    labels = [f"({x},0)" for x in a.labels] + [f"(0,{y})" for y in b.labels]
    return Algebra(F, c, unit, aug, tuple(labels), name or f"{a.name}x{b.name}")


def subalgebra(a: Algebra, basis: np.ndarray, labels=None, name="") -> tuple[Algebra, np.ndarray]:
    """Algebra structure on a unital subalgebra spanned by ``basis`` rows.

    Returns the new algebra and the inclusion matrix (columns = images of the new basis).
    """
    F = a.field
    k = basis.shape[0]
    prods = np.stack([np.stack([multiply(a, basis[i], basis[j]) for j in range(k)]) for i in range(k)])
    coords = la.coordinates(F, basis, prods.reshape(k * k, a.dim)).reshape(k, k, k)
    unit = la.coordinates(F, basis, a.unit.reshape(1, -1))[0]
    aug = F.matmul(basis, a.aug)
    labels = tuple(labels) if labels is not None else tuple(a.format_element(v) for v in basis)
    return Algebra(F, coords, unit, aug, labels, name), basis.T.copy()


# ---------------------------------------------------------------------------
# arithmetic


def left_mult_matrix(a: Algebra, x: np.ndarray) -> np.ndarray:
    _check_vec(a, x)
    return a.field.tensordot(x, a.L, 1)


def right_mult_matrix(a: Algebra, x: np.ndarray) -> np.ndarray:
    _check_vec(a, x)
    return a.field.tensordot(x, a.R, 1)


def multiply(a: Algebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    _check_vec(a, y)
    return a.field.matmul(left_mult_matrix(a, x), y)


def power(a: Algebra, x: np.ndarray, n: int) -> np.ndarray:
    out = a.unit.copy()
    for _ in range(n):
        out = multiply(a, out, x)
    return out


def augmentation(a: Algebra, x: np.ndarray) -> object:
    return a.field.matmul(a.aug.reshape(1, -1), x.reshape(-1, 1))[0, 0]


def _check_vec(a: Algebra, x: np.ndarray) -> None:
    if np.shape(x) != (a.dim,):
        raise la.DimensionMismatch(f"vector of shape {np.shape(x)} in an algebra of dim {a.dim}")


def products(a: Algebra, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """All products ``x y`` for rows x of ``xs`` and y of ``ys``, as rows."""
    F = a.field
    if xs.shape[0] == 0 or ys.shape[0] == 0:
        return F.zeros(0, a.dim)
    Lx = F.tensordot(xs, a.L, 1)  # (m, d, d)
    out = F.tensordot(Lx, ys.T, 1)  # (m, d, n)
    return out.transpose(0, 2, 1).reshape(-1, a.dim)


def product_space(a: Algebra, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return la.row_space(a.field, products(a, u, v), a.dim)


def generated_subalgebra(a: Algebra, gens: np.ndarray) -> np.ndarray:
    """Span of all words in ``gens``: the closure of {1} under left multiplication."""
    F = a.field
    span = la.row_space(F, a.unit.reshape(1, -1), a.dim)
    while gens.shape[0]:
        bigger = la.sum_subspace(F, span, products(a, gens, span))
        if bigger.shape[0] == span.shape[0]:
            break
        span = bigger
    return span


def generated_ideal(a: Algebra, vectors: np.ndarray, side: Side) -> np.ndarray:
    """Canonical basis of the left/right/two-sided ideal generated by rows of ``vectors``."""
    F = a.field
    vectors = np.asarray(vectors).reshape(-1, a.dim)
    if vectors.shape[0] == 0:
        return F.zeros(0, a.dim)
    eye = F.eye(a.dim)
    if side is Side.LEFT:
        return product_space(a, eye, vectors)
    if side is Side.RIGHT:
        return product_space(a, vectors, eye)
    left = products(a, eye, vectors)
    return product_space(a, la.row_space(F, left, a.dim), eye)


def ideal_powers(a: Algebra, basis: np.ndarray, limit: Optional[int] = None) -> list[np.ndarray]:
    """``[I, I^2, ...]`` until the powers stabilise (the last entry repeats or is zero)."""
    F = a.field
    limit = limit or a.dim + 1
    out = [la.row_space(F, basis, a.dim)]
    while out[-1].shape[0] and len(out) <= limit:
        nxt = product_space(a, out[-1], out[0])
        if nxt.shape[0] == out[-1].shape[0]:
            break
        out.append(nxt)
    return out


def is_nilpotent_subspace(a: Algebra, basis: np.ndarray) -> bool:
    return ideal_powers(a, basis)[-1].shape[0] == 0


# ---------------------------------------------------------------------------
# validation


def validate_algebra(a: Algebra) -> Report:
    """Check associativity, unit laws and multiplicativity of ε; every failure is listed."""
    F = a.field
    rep = Report("algebra")
    c = a.c
    ci = la.integer_view(F, c) if F.is_rational else None
    if ci is not None:
        # integral constants: compare exactly over the integers, avoiding Fraction overhead
        lhs = np.tensordot(ci, ci, axes=([2], [0]))
        rhs = np.tensordot(ci, ci, axes=([1], [2])).transpose(0, 2, 3, 1)
    else:
        lhs = F.tensordot(c, c, axes=([2], [0]))  # ((b_i b_j) b_k)_n, shape (i,j,k,n)
        rhs = F.tensordot(c, c, axes=([1], [2])).transpose(0, 2, 3, 1)  # (b_i (b_j b_k))_n
    for i, j, k in sorted({tuple(t[:3]) for t in np.argwhere(lhs != rhs)}):
        rep.fail(f"associativity fails on ({a.labels[i]}, {a.labels[j]}, {a.labels[k]})")
    eye = F.eye(a.dim)
    if not np.array_equal(left_mult_matrix(a, a.unit), eye):
        rep.fail("unit does not act as identity on the left")
    if not np.array_equal(right_mult_matrix(a, a.unit), eye):
        rep.fail("unit does not act as identity on the right")
    eps_prod = F.tensordot(c, a.aug, 1)
    for i, j in np.argwhere(eps_prod != np.asarray(F.matmul(a.aug.reshape(-1, 1), a.aug.reshape(1, -1)))):
        rep.fail(f"augmentation not multiplicative on ({a.labels[i]}, {a.labels[j]})")
    if augmentation(a, a.unit) != F.one:
        rep.fail("augmentation of the unit is not 1")
    return rep


# ---------------------------------------------------------------------------
# Frobenius forms and integrals


@dataclass(frozen=True, eq=False)
class FrobeniusData:
    algebra: Algebra
    form: np.ndarray
    gram: np.ndarray
    u: np.ndarray  # rows; form(u_i v_j) = δ_ij
    v: np.ndarray
    symmetric: bool

    @cached_property
    def gram_inverse(self) -> np.ndarray:
        return la.inverse(self.algebra.field, self.gram)

    def dual_pairs(self):
        return list(zip(self.u, self.v))


def frobenius_data(a: Algebra, form, require_symmetric: bool = False) -> FrobeniusData:
    F = a.field
    form = F.array(form) if not isinstance(form, np.ndarray) else form
    gram = F.tensordot(a.c, form, 1)
    if la.rank(F, gram) != a.dim:
        raise DegenerateForm(f"form has degenerate gram matrix (rank {la.rank(F, gram)} < {a.dim})")
    symmetric = bool(np.array_equal(gram, gram.T))
    if require_symmetric and not symmetric:
        raise NotSymmetric("gram matrix of the form is not symmetric")
    ginv = la.inverse(F, gram)
    return FrobeniusData(a, form, gram, F.eye(a.dim), np.ascontiguousarray(ginv.T), symmetric)


def left_integrals(a: Algebra) -> np.ndarray:
    return _integrals(a, a.L)


def right_integrals(a: Algebra) -> np.ndarray:
    return _integrals(a, a.R)


def _integrals(a: Algebra, mats: np.ndarray) -> np.ndarray:
    F = a.field
    eye = F.eye(a.dim)
    rows = [F.sub(mats[i], F.scal(a.aug[i], eye)) for i in range(a.dim)]
    return la.kernel(F, np.concatenate(rows, axis=0))


def is_unimodular(a: Algebra) -> bool:
    return la.same_subspace(a.field, left_integrals(a), right_integrals(a))


def maschke_semisimple(a: Algebra) -> bool:
    """ε is nonzero on both integral spaces.  Only meaningful for Hopf algebras."""
    F = a.field
    ok = True
    for ints in (left_integrals(a), right_integrals(a)):
        if ints.shape[0] == 0:
            return False
        ok &= not F.is_zero(F.matmul(ints, a.aug))
    return bool(ok)


# ---------------------------------------------------------------------------
# ideals


@dataclass(frozen=True, eq=False)
class Ideal:
    algebra: Algebra
    side: Side
    basis: np.ndarray

    def __post_init__(self):
        a = self.algebra
        basis = la.row_space(a.field, self.basis, a.dim)
        object.__setattr__(self, "basis", basis)
        if not _closed(a, basis, self.side):
            raise NotAnIdeal(f"subspace is not a {self.side.value} ideal")

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.algebra is other.algebra and np.array_equal(self.basis, other.basis) \
            and self.basis.shape == other.basis.shape

    def __hash__(self):
        return id(self.algebra) ^ hash(self.basis.tobytes())


def _closed(a: Algebra, basis: np.ndarray, side: Side) -> bool:
    F = a.field
    eye = F.eye(a.dim)
    if basis.shape[0] == 0:
        return True
    checks = []
    if side in (Side.LEFT, Side.TWO_SIDED):
        checks.append(products(a, eye, basis))
    if side in (Side.RIGHT, Side.TWO_SIDED):
        checks.append(products(a, basis, eye))
    return all(la.contains(F, basis, m) for m in checks)


def radical(a: Algebra) -> Ideal:
    """Jacobson radical: trace-form kernel in characteristic 0, lifted-trace iteration in characteristic p."""
    F = a.field
    if F.is_rational:
        T = _trace_form(a)
        basis = la.kernel(F, T)
    else:
        basis = _radical_char_p(a)
    ok = _closed(a, basis, Side.TWO_SIDED) and is_nilpotent_subspace(a, basis)
    if not ok:
        raise AlgorithmInapplicable("trace method produced a subspace that is not a nilpotent ideal")
    return Ideal(a, Side.TWO_SIDED, basis)


def _trace_form(a: Algebra) -> np.ndarray:
    # Tr(L_i L_j) = sum_{k,m} L[i,k,m] L[j,m,k]
    F = a.field
    return F.tensordot(a.L, a.L.transpose(0, 2, 1), axes=([1, 2], [1, 2]))


def _radical_char_p(a: Algebra) -> np.ndarray:
    F = a.field
    p, d = F.p, a.dim
    top = 0
    while p ** (top + 1) <= d:
        top += 1
    ideal = F.eye(d)
    for i in range(top + 1):
        if ideal.shape[0] == 0:
            break
        mod = p ** (i + 1)
        # G[j, r] = g_i(x_r b_j) for the current ideal basis x_r
        xb = products(a, ideal, F.eye(d)).reshape(ideal.shape[0], d, d)  # [r, j] = x_r b_j
        G = np.zeros((d, ideal.shape[0]), dtype=np.int64)
        for r in range(ideal.shape[0]):
            for j in range(d):
                G[j, r] = _lifted_trace(a, xb[r, j], i, mod)
        coeffs = la.kernel(F, F.array(G))
        ideal = la.row_space(F, F.matmul(coeffs, ideal), d) if coeffs.shape[0] else F.zeros(0, d)
    return ideal


def _lifted_trace(a: Algebra, x: np.ndarray, i: int, mod: int) -> int:
    """``(Tr(X^(p^i)) mod p^(i+1)) / p^i`` for the integer lift X of ``L_x``."""
    p = a.field.p
    X = np.asarray(left_mult_matrix(a, x), dtype=object if mod > (1 << 31) else np.int64)
    Y = X % mod
    for _ in range(i):  # raise to the p-th power i times
        Z = Y
        for _ in range(p - 1):
            Z = (Z @ Y) % mod
        Y = Z
    t = int(np.trace(Y)) % mod
    step = p**i
    if t % step:
        raise AlgorithmInapplicable(f"lifted trace {t} not divisible by {step}")
    return (t // step) % p


def radical_bruteforce(a: Algebra, max_dim: int = 8) -> np.ndarray:
    """Radical as the span of all x whose two-sided ideal AxA is nilpotent.

    Enumerates projective representatives of the nonzero vectors, so only
    finite fields and small dimensions are accepted.
    """
    F = a.field
    d = a.dim
    if F.is_rational or d > max_dim:
        raise AlgorithmInapplicable("brute force needs a finite field and dim <= max_dim")
    p = F.p
    cands = []
    for lead in range(d):
        for tail in itertools.product(range(p), repeat=d - lead - 1):
            v = [0] * lead + [1] + list(tail)
            cands.append(v)
    X = np.array(cands, dtype=np.int64)
    # cheap necessary condition: L_x nilpotent (x lies in AxA)
    Lx = F.tensordot(X, a.L, 1)
    P = Lx.copy()
    k = 1
    while k < d:
        P = np.mod(np.einsum("nij,njk->nik", P, P), p)
        k *= 2
    survivors = X[~np.any(P.reshape(len(X), -1) != 0, axis=1)]
    found = F.zeros(0, d)
    for x in survivors:
        if found.shape[0] and la.membership(F, x, found):
            continue
        ideal = generated_ideal(a, x.reshape(1, -1), Side.TWO_SIDED)
        if is_nilpotent_subspace(a, ideal):
            found = la.sum_subspace(F, found, ideal)
    return found


def is_semisimple(a: Algebra) -> bool:
    return a.radical.dim == 0


def is_local(a: Algebra) -> bool:
    """rad equals the augmentation ideal, i.e. A/rad is the ground field."""
    return a.radical.dim == a.dim - 1 and np.array_equal(a.radical.basis, a.augmentation_ideal)


def socle(a: Algebra, side: Side = Side.LEFT) -> Ideal:
    """Left socle ``{x : rad x = 0}`` or right socle ``{x : x rad = 0}``."""
    F = a.field
    rad = a.radical.basis
    if rad.shape[0] == 0:
        return Ideal(a, Side.TWO_SIDED, F.eye(a.dim))
    if side is Side.LEFT:
        mats = F.tensordot(rad, a.L, 1)
    elif side is Side.RIGHT:
        mats = F.tensordot(rad, a.R, 1)
    else:
        raise ValueError("socle side must be LEFT or RIGHT")
    return Ideal(a, Side.TWO_SIDED, la.kernel(F, mats.reshape(-1, a.dim)))


def annihilator(a: Algebra, vectors: Sequence[np.ndarray], side: Side = Side.LEFT, module=None) -> Ideal:
    """Elements killing every given vector.

    With ``module`` (an ``FDModule``) this is ``{x : x.v = 0}``; otherwise the
    vectors live in the regular bimodule and ``side`` picks ``xv = 0`` (left)
    or ``vx = 0`` (right).
    """
    F = a.field
    blocks = []
    for v in vectors:
        if module is not None:
            blocks.append(F.tensordot(module.action, v, 1).T)  # columns rho(b_i) v
        elif side is Side.LEFT:
            blocks.append(right_mult_matrix(a, v))
        elif side is Side.RIGHT:
            blocks.append(left_mult_matrix(a, v))
        else:
            raise ValueError("annihilator side must be LEFT or RIGHT")
    if not blocks:
        return Ideal(a, side, F.eye(a.dim))
    ker = la.kernel(F, np.concatenate(blocks, axis=0))
    return Ideal(a, Side.LEFT if module is not None else side, ker)


# ---------------------------------------------------------------------------
# minimal ideals


@dataclass(frozen=True)
class SquareZero:
    pass


@dataclass(frozen=True, eq=False)
class Idempotent:
    e: np.ndarray


def minimal_ideal_dichotomy(l: Ideal, check_minimal: bool = True):
    """``SquareZero()`` if L^2 = 0, else ``Idempotent(e)`` with e^2 = e and Ae = L."""
    a = l.algebra
    F = a.field
    if l.side not in (Side.LEFT, Side.TWO_SIDED) or l.dim == 0:
        raise NotMinimal("expected a nonzero left ideal")
    if check_minimal:
        from .repmod import Simple, ideal_module, is_simple

        if not isinstance(is_simple(ideal_module(l)), Simple):
            raise NotMinimal("left ideal is not a simple module")
    B = l.basis
    if la.rank(F, products(a, B, B)) == 0:
        return SquareZero()
    for x in B:
        right = products(a, B, x.reshape(1, -1))  # rows: b x for b in basis of L
        if not F.is_zero(right):
            # e = sum c_r B_r with e x = x: solve right.T c = x
            coeff, _ = la.solve(F, right.T, x)
            if coeff is None:
                raise NotMinimal("right multiplication L -> L is not onto")
            e = F.matmul(coeff.reshape(1, -1), B)[0]
            if not np.array_equal(multiply(a, e, e), e):
                raise NotMinimal("extracted element is not idempotent")
            return Idempotent(e)
    raise AssertionError("unreachable: L^2 != 0 but Lx = 0 for every basis x")


def field_product_counterexample(F: Field, r0: Algebra, form0) -> tuple[Algebra, FrobeniusData]:
    """``F x r0`` with ε the first projection and the form ``(x, y) -> x + form0(y)``."""
    if not is_local(r0):
        raise AlgebraError("r0 must be local")
    if is_semisimple(r0):
        raise AlgebraError("r0 must not be semisimple")
    frobenius_data(r0, form0)
    R = product_algebra(ground_field(F), r0, name=f"{F.name}x{r0.name}")
    form = np.concatenate([F.array([1]), F.array(list(form0)) if not isinstance(form0, np.ndarray) else form0])
    fd = frobenius_data(R, form)
    return R, fd
