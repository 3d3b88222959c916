"""Exact dense linear algebra over the rationals and prime fields.

Matrices are plain numpy arrays whose dtype is fixed by the field:

* ``GF(p)`` uses ``int64`` entries in ``[0, p)`` (``object`` ints for huge p),
* ``QQ`` uses ``object`` arrays holding :class:`fractions.Fraction`.

Every function takes the :class:`Field` first.  Subspaces are stored as
matrices whose *rows* are basis vectors, kept in reduced row-echelon form
so that two bases span the same subspace iff the arrays are equal.
Linear maps act on column vectors: ``y = A @ x``.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional, Sequence

import numpy as np


class FieldMismatch(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


_INT64_SAFE = 1 << 20  # p below this keeps p*p*k inside int64 for k <= 2**22


@dataclass(frozen=True)
class Field:
    """Ground field: ``p == 0`` for the rationals, otherwise GF(p)."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError(f"GF({self.p}): modulus must be prime")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def name(self) -> str:
        return "QQ" if self.p == 0 else f"GF({self.p})"

    def __repr__(self):
        return self.name

    @property
    def dtype(self):
        if self.p and self.p < _INT64_SAFE:
            return np.int64
        return object

    # -- scalars ---------------------------------------------------------

    def __call__(self, x):
        if self.p == 0:
            if isinstance(x, str):
                return Fraction(x)
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in {self.name}")
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        if isinstance(x, str):
            return self(Fraction(x))
        return int(x) % self.p

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p == 0:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.p)

    def format(self, x) -> object:
        """JSON form of a scalar: ``"p/q"`` strings for QQ, ints for GF(p)."""
        if self.p == 0:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return int(x)

    def parse(self, token) -> object:
        if self.p == 0:
            return Fraction(str(token)) if not isinstance(token, int) else Fraction(token)
        if isinstance(token, str):
            return self(Fraction(token))
        if not isinstance(token, int) or not 0 <= token < self.p:
            raise FieldMismatch(f"{token!r} is not a canonical element of {self.name}")
        return token

    # -- arrays ----------------------------------------------------------

    def array(self, data) -> np.ndarray:
        """Coerce nested data (ints, Fractions, ``"p/q"`` strings) into a field array."""
        arr = np.array(data, dtype=object)
        if self.p == 0:
            out = np.empty(arr.shape, dtype=object)
            flat = out.reshape(-1)
            for i, x in enumerate(arr.reshape(-1)):
                flat[i] = Fraction(x) if not isinstance(x, Fraction) else x
            return out
        if arr.size and any(isinstance(x, (Fraction, str)) for x in arr.reshape(-1)):
            arr = np.vectorize(self, otypes=[object])(arr)
        return self.reduce(arr.astype(self.dtype) if self.dtype is not object else arr)

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        """Bring an array produced by integer arithmetic back into canonical form."""
        if self.p == 0:
            return arr
        return np.mod(arr, self.p)

    def check(self, arr: np.ndarray) -> np.ndarray:
        """Raise :class:`FieldMismatch` unless ``arr`` is a canonical array of this field."""
        if not isinstance(arr, np.ndarray):
            raise FieldMismatch("expected a numpy array")
        if self.p == 0:
            if arr.dtype != object or not all(isinstance(x, Fraction) for x in arr.reshape(-1)):
                raise FieldMismatch("QQ arrays must hold Fractions")
        else:
            if arr.dtype != np.dtype(self.dtype):
                raise FieldMismatch(f"{self.name} arrays must have dtype {np.dtype(self.dtype)}")
            if arr.size and (arr.min() < 0 or arr.max() >= self.p):
                raise FieldMismatch(f"entries outside [0, {self.p})")
        return arr

    def zeros(self, *shape) -> np.ndarray:
        if len(shape) == 1 and isinstance(shape[0], tuple):
            shape = shape[0]
        if self.p == 0:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=self.dtype)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = self.one
        return out

    def unit_vector(self, n: int, i: int) -> np.ndarray:
        v = self.zeros(n)
        v[i] = self.one
        return v

    def scal(self, c, arr: np.ndarray) -> np.ndarray:
        return self.reduce(arr * self(c))

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(a + b)

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(a - b)

    def neg(self, a: np.ndarray) -> np.ndarray:
        return self.reduce(-a)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.p == 0:
            return _rational_contract(a, b, lambda x, y: x @ y)
        return self.reduce(a @ b)

    def tensordot(self, a: np.ndarray, b: np.ndarray, axes=2) -> np.ndarray:
        if self.p == 0:
            return _rational_contract(a, b, lambda x, y: np.tensordot(x, y, axes=axes))
        return self.reduce(np.tensordot(a, b, axes=axes))

    def kron(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(np.kron(a, b))

    def is_zero(self, arr: np.ndarray) -> bool:
        return not np.any(arr != 0)

    def random(self, rng: np.random.Generator, shape, bound: int = 3) -> np.ndarray:
        """Seeded random array; QQ entries are small integers in ``[-bound, bound]``."""
        if self.p == 0:
            ints = rng.integers(-bound, bound + 1, size=shape)
            return self.array(ints.tolist()) if ints.ndim else Fraction(int(ints))
        if self.dtype is object:
            return self.array(rng.integers(0, min(self.p, 1 << 62), size=shape).tolist())
        return rng.integers(0, self.p, size=shape).astype(np.int64)


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


def field_from_name(name: str) -> Field:
    """Parse ``"QQ"``, ``"Q"``, ``"GF(3)"`` or ``"GF3"``."""
    s = name.strip().upper().replace(" ", "")
    if s in ("QQ", "Q", "RATIONALS"):
        return QQ
    if s.startswith("GF"):
        return GF(int(s[2:].strip("()")))
    raise ValueError(f"unknown field {name!r}")


# ---------------------------------------------------------------------------
# rational fast path: contract integer numerators, divide once


def _common_denominator(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 1
    return reduce(math.lcm, (x.denominator for x in arr.reshape(-1)), 1)


def _numerators(arr: np.ndarray, den: int) -> np.ndarray:
    out = np.empty(arr.shape, dtype=object)
    flat = out.reshape(-1)
    for i, x in enumerate(arr.reshape(-1)):
        flat[i] = x.numerator * (den // x.denominator)
    return out


def _max_abs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return max(abs(int(x)) for x in arr.reshape(-1))


_PARTS_CACHE: dict = {}
_CACHE_MIN_SIZE = 256


def _integer_parts(arr: np.ndarray) -> tuple[np.ndarray, int]:
    """``(N, den)`` with ``arr == N / den``; N is int64 when it fits, else object.

    Large operands (algebra tables, module actions) recur constantly, so their
    parts are memoised by identity and the array is frozen read-only.
    """
    if arr.size >= _CACHE_MIN_SIZE:
        hit = _PARTS_CACHE.get(id(arr))
        if hit is not None and hit[0]() is arr and not arr.flags.writeable:
            return hit[1], hit[2]
        parts = _compute_integer_parts(arr)
        try:
            arr.flags.writeable = False
            key = id(arr)
            _PARTS_CACHE[key] = (weakref.ref(arr, lambda _r, k=key: _PARTS_CACHE.pop(k, None)), *parts)
        except (ValueError, TypeError):
            pass
        return parts
    return _compute_integer_parts(arr)


def _compute_integer_parts(arr: np.ndarray) -> tuple[np.ndarray, int]:
    flat = arr.reshape(-1).tolist()
    dens = {x.denominator for x in flat}
    den = reduce(math.lcm, dens, 1)
    if den == 1:
        nums = [x.numerator for x in flat]
    else:
        nums = [x.numerator * (den // x.denominator) for x in flat]
    try:
        ints = np.array(nums, dtype=np.int64)
    except OverflowError:
        ints = np.array(nums, dtype=object)
    return ints.reshape(arr.shape), den


def _rational_contract(a: np.ndarray, b: np.ndarray, op) -> np.ndarray:
    na, da = _integer_parts(a)
    nb, db = _integer_parts(b)
    inner = max(1, a.size, b.size)
    if na.dtype != object and nb.dtype != object and na.size and nb.size:
        bound = int(np.abs(na).max()) * int(np.abs(nb).max()) * inner
        if bound < (1 << 62):
            return _to_fractions(np.asarray(op(na, nb)), da * db)
    res = op(na.astype(object), nb.astype(object))
    return _to_fractions(np.asarray(res), da * db)


def _to_fractions(res: np.ndarray, den: int) -> np.ndarray:
    # results usually take few distinct values; build each Fraction once
    if res.dtype != object and res.size:
        vals, inv = np.unique(res.reshape(-1), return_inverse=True)
        fr = np.empty(len(vals), dtype=object)
        for i, x in enumerate(vals):
            fr[i] = Fraction(int(x), den)
        return fr[inv].reshape(res.shape)
    out = np.empty(res.shape, dtype=object)
    flat = out.reshape(-1)
    for i, x in enumerate(res.reshape(-1)):
        flat[i] = Fraction(int(x), den)
    return out


def integer_view(F: "Field", arr: np.ndarray) -> Optional[np.ndarray]:
    """An int64 copy of ``arr`` when it is integral with small entries, else None.

    For GF(p) this is the array itself; for QQ only integer-valued arrays qualify.
    """
    if F.p:
        return arr if arr.dtype != object else None
    if any(x.denominator != 1 for x in arr.reshape(-1)):
        return None
    ints = np.array([x.numerator for x in arr.reshape(-1)], dtype=object).reshape(arr.shape)
    if ints.size and _max_abs(ints) >= (1 << 20):
        return None
    return ints.astype(np.int64)


# ---------------------------------------------------------------------------
# elimination


def rref(F: Field, m: np.ndarray) -> tuple[np.ndarray, list[int], int]:
    """Reduced row-echelon form.  Returns ``(R, pivot_columns, rank)``."""
    if np.ndim(m) != 2:
        raise DimensionMismatch("rref expects a 2-d array")
    if F.p == 0:
        return _rref_rational(m)
    M = np.array(m, dtype=F.dtype, copy=True)
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    p = F.p
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c] != 0)
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            M[[r, k]] = M[[k, r]]
        piv = M[r, c]
        if piv != 1:
            inv = F.inv(piv)
            M[r, c:] = M[r, c:] * inv
            if p:
                M[r, c:] %= p
        col = M[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col != 0)
        if others.size:
            upd = M[np.ix_(others, np.arange(c, cols))] - np.outer(col[others], M[r, c:])
            if p:
                upd %= p
            M[np.ix_(others, np.arange(c, cols))] = upd
        pivots.append(c)
        r += 1
    return M, pivots, r


def _rref_rational(m: np.ndarray) -> tuple[np.ndarray, list[int], int]:
    # fraction-free Gauss-Jordan on integer rows; rows are kept primitive
    rows, cols = m.shape
    M = np.empty((rows, cols), dtype=object)
    for i in range(rows):
        den = _common_denominator(m[i])
        M[i] = _numerators(m[i], den)
        _make_primitive(M, i)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c] != 0)
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            M[[r, k]] = M[[k, r]]
        piv = M[r, c]
        col = M[:, c].copy()
        col[r] = 0
        for i in np.flatnonzero(col != 0):
            M[i] = piv * M[i] - col[i] * M[r]
            _make_primitive(M, i)
        pivots.append(c)
        r += 1
    out = np.empty((rows, cols), dtype=object)
    out.fill(Fraction(0))
    for i, c in enumerate(pivots):
        piv = M[i, c]
        out[i] = [Fraction(int(x), piv) for x in M[i]]
    return out, pivots, r


def _make_primitive(M: np.ndarray, i: int) -> None:
    g = int(np.gcd.reduce(M[i])) if M.shape[1] else 0
    if g > 1:
        M[i] = M[i] // g


def rank(F: Field, m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    return rref(F, m)[2]


def row_space(F: Field, rows: np.ndarray, ncols: Optional[int] = None) -> np.ndarray:
    """Canonical basis (RREF, zero rows dropped) of the span of the given rows."""
    rows = np.asarray(rows)
    if rows.ndim == 1:
        rows = rows.reshape(1, -1)
    if rows.shape[0] == 0:
        n = ncols if ncols is not None else rows.shape[1]
        return F.zeros(0, n)
    R, _, r = rref(F, rows)
    return R[:r]


span = row_space


def kernel(F: Field, a: np.ndarray) -> np.ndarray:
    """Canonical basis (rows) of ``{x : a @ x = 0}``."""
    rows, cols = a.shape
    if rows == 0:
        return F.eye(cols)
    R, pivots, r = rref(F, a)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = F.zeros(len(free), cols)
    for i, f in enumerate(free):
        basis[i, f] = F.one
        for j, pc in enumerate(pivots):
            basis[i, pc] = (-R[j, f]) % F.p if F.p else -R[j, f]
    return row_space(F, basis, cols)


def image(F: Field, a: np.ndarray) -> np.ndarray:
    """Canonical basis (rows) of the column space of ``a``."""
    return row_space(F, a.T, a.shape[0])


def left_kernel(F: Field, a: np.ndarray) -> np.ndarray:
    return kernel(F, a.T)


def solve(F: Field, a: np.ndarray, b: np.ndarray):
    """Solve ``a @ x = b``.

    ``b`` may be a vector or a matrix of right-hand sides.  Returns
    ``(x, kernel_basis)`` or ``(None, kernel_basis)`` if inconsistent.
    """
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    vec = b.ndim == 1
    B = b.reshape(-1, 1) if vec else b
    n = a.shape[1]
    aug = np.concatenate([np.asarray(a, dtype=F.dtype), np.asarray(B, dtype=F.dtype)], axis=1)
    R, pivots, r = rref(F, aug) if aug.shape[0] else (aug, [], 0)
    ker = kernel(F, a) if a.shape[0] else F.eye(n)
    if any(p >= n for p in pivots):
        return None, ker
    x = F.zeros(n, B.shape[1])
    for j, pc in enumerate(pivots):
        x[pc] = R[j, n:]
    return (x[:, 0] if vec else x), ker


def inverse(F: Field, a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionMismatch("inverse of a non-square matrix")
    x, _ = solve(F, a, F.eye(n))
    if x is None or rank(F, a) != n:
        raise ZeroDivisionError("matrix is singular")
    return x


def is_invertible(F: Field, a: np.ndarray) -> bool:
    return a.shape[0] == a.shape[1] and rank(F, a) == a.shape[0]


def sum_subspace(F: Field, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    _same_ambient(u, v)
    return row_space(F, np.concatenate([u, v], axis=0), u.shape[1])


def intersect(F: Field, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    _same_ambient(u, v)
    n = u.shape[1]
    if u.shape[0] == 0 or v.shape[0] == 0:
        return F.zeros(0, n)
    stacked = np.concatenate([u, v], axis=0)
    coeffs = left_kernel(F, stacked)
    if coeffs.shape[0] == 0:
        return F.zeros(0, n)
    return row_space(F, F.matmul(coeffs[:, : u.shape[0]], u), n)


def membership(F: Field, vec: np.ndarray, basis: np.ndarray) -> bool:
    if basis.shape[0] == 0:
        return F.is_zero(vec)
    if vec.shape[-1] != basis.shape[1]:
        raise DimensionMismatch("vector and subspace live in different spaces")
    return rank(F, np.concatenate([basis, vec.reshape(1, -1)], axis=0)) == rank(F, basis)


def contains(F: Field, big: np.ndarray, small: np.ndarray) -> bool:
    """Is span(small) inside span(big)?"""
    if small.shape[0] == 0:
        return True
    return rank(F, np.concatenate([big, small], axis=0)) == rank(F, big)


def same_subspace(F: Field, u: np.ndarray, v: np.ndarray) -> bool:
    cu, cv = row_space(F, u, u.shape[1]), row_space(F, v, v.shape[1])
    return cu.shape == cv.shape and bool(np.all(cu == cv))


def coordinates(F: Field, basis: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    """Coordinates of the rows of ``vecs`` in terms of ``basis`` rows (must lie in the span)."""
    x, _ = solve(F, basis.T, vecs.T)
    if x is None:
        raise ValueError("vector not in span")
    return x.T


def rref_coordinates(basis: np.ndarray, pivots: Sequence[int], vecs: np.ndarray) -> np.ndarray:
    """Coordinates against an RREF basis are just the pivot entries."""
    return vecs[..., list(pivots)]


def pivots_of(F: Field, basis: np.ndarray) -> list[int]:
    """Pivot columns of a basis already in RREF."""
    out = []
    for row in basis:
        nz = np.flatnonzero(row != 0)
        out.append(int(nz[0]))
    return out


def complement_columns(F: Field, basis: np.ndarray) -> list[int]:
    """Standard basis indices spanning a complement of an RREF subspace."""
    piv = set(pivots_of(F, basis))
    return [c for c in range(basis.shape[1]) if c not in piv]


def quotient_projection(F: Field, basis: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Matrix of ``V -> V/U`` in coordinates of the complement columns, and those columns."""
    n = basis.shape[1]
    piv = pivots_of(F, basis)
    comp = complement_columns(F, basis)
    sel = F.zeros(len(piv), n)
    for i, c in enumerate(piv):
        sel[i, c] = F.one
    reducer = F.sub(F.eye(n), F.matmul(basis.T, sel)) if piv else F.eye(n)
    return reducer[comp, :], comp


def nilpotent(F: Field, a: np.ndarray) -> bool:
    n = a.shape[0]
    x = a
    k = 1
    while k < n:
        x = F.matmul(x, x)
        k *= 2
    return F.is_zero(x) if n else True


def stack(F: Field, mats: Iterable[np.ndarray], ncols: int) -> np.ndarray:
    mats = [m.reshape(-1, ncols) for m in mats]
    if not mats:
        return F.zeros(0, ncols)
    return np.concatenate(mats, axis=0)


def _same_ambient(u: np.ndarray, v: np.ndarray) -> None:
    if u.shape[1] != v.shape[1]:
        raise DimensionMismatch(f"subspaces of dimension {u.shape[1]} and {v.shape[1]}")
    if (u.dtype == object) != (v.dtype == object):
        raise FieldMismatch("subspaces over different fields")
