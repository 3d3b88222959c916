"""Directed systems of symmetric Frobenius stages, lazy colimit elements, coherent
modules presented at stages, and the stage-level witness searches."""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from . import exactla as la
from . import groups as gr
from .algcore import (Algebra, FrobeniusData, Ideal, Report, Side, frobenius_data, generated_ideal,
                      is_local, is_semisimple, products, validate_algebra)
from .frobext import (AlgebraMorphism, FreeBasis, FrobeniusExtensionWitness, NotFree, coset_witness,
                      form_witness, free_basis, group_inclusion, induce, induce_hom, restrict,
                      validate_morphism, verify_witness)
from .hopfcore import HopfData, dual_function_algebra, group_algebra, validate_hopf
from .repmod import (FDModule, FreeCover, ModuleHom, Simple, choose_generators, direct_sum, free_cover,
                     hom_space, ideal_module, is_simple, kernel_module,
                     radical_submodule, regular_module, submodule, submodule_generated, trivial_module)


class NotComparable(ValueError):
    pass


class NotFoundAtDepth(LookupError):
    pass


class NotExact(ValueError):
    pass


class NotInduced(ValueError):
    pass


class UnsupportedStage(ValueError):
    pass


class IncompatibleModule(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Stage:
    id: str
    algebra: Algebra
    frobenius: FrobeniusData
    hopf: Optional[HopfData] = None
    group: Optional[gr.FiniteGroup] = None
    label: str = ""

    @property
    def dim(self) -> int:
        return self.algebra.dim


@dataclass(frozen=True, eq=False)
class Cover:
    """A covering pair ``lo < hi`` with its inclusion, free basis and extension witness."""

    lo: str
    hi: str
    inclusion: AlgebraMorphism
    basis_hints: Optional[np.ndarray] = None
    witness_kind: str = "form"  # "coset" or "form"
    coset_data: Optional[tuple] = None  # (ambient group, subgroup element indices)

    @cached_property
    def free_basis(self) -> FreeBasis:
        return free_basis(self.inclusion, hints=self.basis_hints)

    @cached_property
    def witness(self) -> FrobeniusExtensionWitness:
        if self.witness_kind == "coset":
            K, elems = self.coset_data
            return coset_witness(K, elems, self.inclusion.field, inc=self.inclusion)
        raise RuntimeError("form witnesses need Frobenius data; use DirectedSystem.witness")


class DirectedSystem:
    """A finite truncation of a directed poset of stages with inclusions on covering pairs.

    Stages and covers are produced by ``builder`` on first use and memoised
    behind a lock, so a system may be shared between threads.
    """

    def __init__(self, name: str, field: la.Field, ids: Sequence[str], covers: Sequence[tuple[str, str]],
                 stage_builder: Callable[[str], Stage], cover_builder: Callable[["DirectedSystem", str, str], Cover],
                 base: Optional[str] = None, family: str = "custom", params: Optional[dict] = None,
                 depth: int = 0, unbounded: bool = False):
        self.name = name
        self.field = field
        self.ids = tuple(ids)
        self.covers = tuple(covers)
        self.family = family
        self.params = dict(params or {})
        self.depth = depth
        self.unbounded = unbounded
        self._stage_builder = stage_builder
        self._cover_builder = cover_builder
        self._stages: dict[str, Stage] = {}
        self._cover_cache: dict[tuple[str, str], Cover] = {}
        self._lock = threading.RLock()
        known = set(self.ids)
        for lo, hi in self.covers:
            if lo not in known or hi not in known:
                raise ValueError(f"cover ({lo}, {hi}) mentions an unknown stage")
        self._up = {i: [] for i in self.ids}
        for lo, hi in self.covers:
            self._up[lo].append(hi)
        self._leq = self._closure()
        mins = [i for i in self.ids if all(self.leq(i, j) for j in self.ids)]
        if base is None:
            if not mins:
                raise ValueError("the poset has no least element")
            base = mins[0]
        self.base = base
        self.level = self._levels()

    # -- poset -------------------------------------------------------------

    def _closure(self) -> set[tuple[str, str]]:
        rel = {(i, i) for i in self.ids}
        frontier = list(rel)
        while frontier:
            nxt = []
            for lo, mid in frontier:
                for hi in self._up[mid]:
                    if (lo, hi) not in rel:
                        rel.add((lo, hi))
                        nxt.append((lo, hi))
            frontier = nxt
        return rel

    def _levels(self) -> dict[str, int]:
        level = {self.base: 0}
        for i in self.topological():
            for j in self._up[i]:
                level[j] = max(level.get(j, 0), level.get(i, 0) + 1)
        return level

    def topological(self) -> list[str]:
        """Stage ids ordered so that every stage comes after all stages below it."""
        return sorted(self.ids, key=lambda i: (sum(1 for j in self.ids if self.leq(j, i)), self.ids.index(i)))

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self._leq

    def above(self, a: str, strict: bool = False) -> list[str]:
        """Stages ``μ ≽ a`` in deterministic order (level, then declaration order)."""
        out = [i for i in self.ids if self.leq(a, i) and (not strict or i != a)]
        return sorted(out, key=self.sort_key)

    def sort_key(self, i: str):
        return (self.level[i], self.ids.index(i))

    def upper_bound(self, a: str, b: str) -> str:
        """Least-ranked common upper bound; total on pairs of a filtered truncation."""
        common = [i for i in self.ids if self.leq(a, i) and self.leq(b, i)]
        if not common:
            raise NotComparable(f"stages {a} and {b} have no upper bound in this truncation")
        minimal = [i for i in common if not any(j != i and self.leq(j, i) for j in common)]
        return min(minimal, key=self.sort_key)

    def path(self, lo: str, hi: str) -> list[tuple[str, str]]:
        """A covering chain from ``lo`` to ``hi`` (first in declaration order)."""
        if not self.leq(lo, hi):
            raise NotComparable(f"{hi} is not above {lo}")
        if lo == hi:
            return []
        for nxt in self._up[lo]:
            if self.leq(nxt, hi):
                return [(lo, nxt)] + self.path(nxt, hi)
        raise AssertionError("unreachable: order closure without a covering chain")

    def all_paths(self, lo: str, hi: str) -> list[list[tuple[str, str]]]:
        if lo == hi:
            return [[]]
        out = []
        for nxt in self._up[lo]:
            if self.leq(nxt, hi):
                out += [[(lo, nxt)] + p for p in self.all_paths(nxt, hi)]
        return out

    # -- stages ------------------------------------------------------------

    def stage(self, i: str) -> Stage:
        with self._lock:
            if i not in self._stages:
                if i not in self.ids:
                    raise KeyError(f"unknown stage {i!r}")
                self._stages[i] = self._stage_builder(i)
            return self._stages[i]

    def cover(self, lo: str, hi: str) -> Cover:
        with self._lock:
            key = (lo, hi)
            if key not in self._cover_cache:
                if key not in self.covers:
                    raise KeyError(f"({lo}, {hi}) is not a covering pair")
                self._cover_cache[key] = self._cover_builder(self, lo, hi)
            return self._cover_cache[key]

    def free_basis(self, lo: str, hi: str) -> FreeBasis:
        cov = self.cover(lo, hi)
        with self._lock:
            return cov.free_basis

    def witness(self, lo: str, hi: str) -> FrobeniusExtensionWitness:
        cov = self.cover(lo, hi)
        if cov.witness_kind == "coset":
            return cov.witness
        with self._lock:
            key = ("witness", lo, hi)
            if key not in self._cover_cache:
                self._cover_cache[key] = form_witness(cov.inclusion, self.stage(hi).frobenius,
                                                      self.stage(lo).frobenius, basis=cov.free_basis)
            return self._cover_cache[key]

    def inclusion(self, lo: str, hi: str) -> AlgebraMorphism:
        """Composite inclusion along the chosen covering chain."""
        A = self.stage(lo).algebra
        mat = self.field.eye(A.dim)
        for a, b in self.path(lo, hi):
            mat = self.field.matmul(self.cover(a, b).inclusion.matrix, mat)
        return AlgebraMorphism(A, self.stage(hi).algebra, mat)

    def dims(self) -> dict[str, int]:
        return {i: self.stage(i).dim for i in self.ids}

    def __repr__(self):
        return f"DirectedSystem({self.name}, {self.field.name}, stages={list(self.ids)})"


# ---------------------------------------------------------------------------
# validation


def validate_system(sys: DirectedSystem) -> Report:
    """Stage axioms, inclusion morphisms, freeness, extension witnesses and path coherence.

    Failures name the offending stage or pair.
    """
    rep = Report(f"validate:{sys.name}")
    base = sys.stage(sys.base)
    if base.dim != 1:
        rep.fail(f"base stage {sys.base} is not the ground field (dim {base.dim})")
    for i in sys.ids:
        try:
            st = sys.stage(i)
        except Exception as exc:  # noqa: BLE001 - surfaced in the report
            rep.fail(f"stage {i}: {type(exc).__name__}: {exc}")
            continue
        sub = validate_algebra(st.algebra)
        rep.failures += [f"stage {i}: {msg}" for msg in sub.failures]
        if not st.frobenius.symmetric:
            rep.fail(f"stage {i}: Frobenius form is not symmetric")
        if st.hopf is not None:
            hrep = validate_hopf(st.hopf)
            rep.failures += [f"stage {i}: {msg}" for msg in hrep.failures if msg not in sub.failures]
            if not hrep.data.get("involutive"):
                rep.fail(f"stage {i}: antipode is not involutive")
    for lo, hi in sys.covers:
        pair = f"pair ({lo}, {hi})"
        try:
            cov = sys.cover(lo, hi)
            mrep = validate_morphism(cov.inclusion)
            rep.failures += [f"{pair}: {msg}" for msg in mrep.failures]
            if not mrep.ok:
                continue
            fb = sys.free_basis(lo, hi)
            if fb.rank * sys.stage(lo).dim != sys.stage(hi).dim:
                rep.fail(f"{pair}: free rank {fb.rank} does not match the dimensions")
            wrep = verify_witness(sys.witness(lo, hi))
            rep.failures += [f"{pair}: {msg}" for msg in wrep.failures]
        except (NotFree, la.DimensionMismatch, ValueError, AssertionError) as exc:
            rep.fail(f"{pair}: {type(exc).__name__}: {exc}")
    if rep.ok:
        for lo in sys.ids:
            for hi in sys.above(lo, strict=True):
                paths = sys.all_paths(lo, hi)
                if len(paths) < 2:
                    continue
                mats = [_path_matrix(sys, p, lo) for p in paths]
                if any(not np.array_equal(mats[0], m) for m in mats[1:]):
                    rep.fail(f"inclusions from {lo} to {hi} do not commute")
    tops = [i for i in sys.ids if not sys._up[i]]
    rep.data["stages"] = {i: sys.stage(i).dim for i in sys.ids} if rep.ok else {}
    rep.data["maximal_in_truncation"] = tops
    rep.data["extendable"] = sys.unbounded
    return rep


def _path_matrix(sys: DirectedSystem, path, lo: str) -> np.ndarray:
    F = sys.field
    mat = F.eye(sys.stage(lo).dim)
    for a, b in path:
        mat = F.matmul(sys.cover(a, b).inclusion.matrix, mat)
    return mat


# ---------------------------------------------------------------------------
# builtin families


def _group_stage(sid: str, G: gr.FiniteGroup, F: la.Field, label: str) -> Stage:
    a, h, fd = group_algebra(G, F)
    return Stage(sid, a, fd, h, G, label)


def prufer(p: int, F: la.Field, depth: int) -> DirectedSystem:
    """``F C_1 < F C_p < F C_{p^2} < ...``; stage k is ``F C_{p^k}`` and g_k = g_{k+1}^p."""
    ids = [str(k) for k in range(depth + 1)]

    def build(sid):
        k = int(sid)
        return _group_stage(sid, gr.cyclic(p ** k, f"g{k}"), F, f"C{p ** k}")

    def cover(sys, lo, hi):
        A, B = sys.stage(hi).algebra, sys.stage(lo).algebra
        M = F.zeros(A.dim, B.dim)
        for x in range(B.dim):
            M[(p * x) % A.dim, x] = F.one
        inc = AlgebraMorphism(B, A, M)
        elems = sorted(int(i) for i in np.flatnonzero(np.any(M != 0, axis=1)))
        return Cover(lo, hi, inc, witness_kind="coset", coset_data=(sys.stage(hi).group, elems))

    return DirectedSystem(f"prufer({p})", F, ids, list(zip(ids, ids[1:])), build, cover, base="0",
                          family="prufer", params={"p": p}, depth=depth, unbounded=True)


def symmetric_chain(n_max: int, F: la.Field, depth: Optional[int] = None) -> DirectedSystem:
    """``F S_1 < F S_2 < ... < F S_n`` with S_k fixing the last point of S_{k+1}."""
    top = n_max if depth is None else min(n_max, depth + 1)
    ids = [str(k) for k in range(1, top + 1)]

    def build(sid):
        return _group_stage(sid, gr.symmetric(int(sid)), F, f"S{sid}")

    def cover(sys, lo, hi):
        G, K = sys.stage(lo).group, sys.stage(hi).group
        pos = {perm: i for i, perm in enumerate(K.elements)}
        elems = [pos[tuple(perm) + (len(perm),)] for perm in G.elements]
        inc = group_inclusion(K, elems, F, B=sys.stage(lo).algebra, A=sys.stage(hi).algebra) \
            if elems == sorted(elems) else _unsorted_inclusion(sys, lo, hi, elems)
        return Cover(lo, hi, inc, witness_kind="coset", coset_data=(K, sorted(elems)))

    return DirectedSystem(f"symmetric_chain({n_max})", F, ids, list(zip(ids, ids[1:])), build, cover,
                          base="1", family="symmetric_chain", params={"n_max": n_max}, depth=top - 1,
                          unbounded=True)


def _unsorted_inclusion(sys, lo, hi, elems) -> AlgebraMorphism:
    A, B = sys.stage(hi).algebra, sys.stage(lo).algebra
    M = sys.field.zeros(A.dim, B.dim)
    for q, g in enumerate(elems):
        M[g, q] = sys.field.one
    return AlgebraMorphism(B, A, M)


def dual_profinite(p: int, F: la.Field, depth: int) -> DirectedSystem:
    """``F(Z/p) < F(Z/p^2) < ...`` by pullback along reduction mod p^(k-1)."""
    ids = [str(k) for k in range(depth + 1)]

    def build(sid):
        k = int(sid)
        G = gr.cyclic(p ** k)
        a, h, fd = dual_function_algebra(G, F)
        return Stage(sid, a, fd, h, G, f"F(Z/{p ** k})")

    def cover(sys, lo, hi):
        A, B = sys.stage(hi).algebra, sys.stage(lo).algebra
        M = F.zeros(A.dim, B.dim)
        for x in range(A.dim):
            M[x, x % B.dim] = F.one
        inc = AlgebraMorphism(B, A, M)
        hints = F.zeros(A.dim // B.dim, A.dim)
        for x in range(A.dim):
            hints[x // B.dim, x] = F.one
        return Cover(lo, hi, inc, basis_hints=hints, witness_kind="form")

    return DirectedSystem(f"dual_profinite({p})", F, ids, list(zip(ids, ids[1:])), build, cover, base="0",
                          family="dual_profinite", params={"p": p}, depth=depth, unbounded=True)


_LATTICE = {
    "1": [],
    "<(12)>": [(1, 0, 2, 3)],
    "<(34)>": [(0, 1, 3, 2)],
    "<(12),(34)>": [(1, 0, 2, 3), (0, 1, 3, 2)],
    "D4": [(1, 0, 2, 3), (2, 3, 0, 1)],
    "S4": [(1, 0, 2, 3), (1, 2, 3, 0)],
}
_LATTICE_COVERS = [("1", "<(12)>"), ("1", "<(34)>"), ("<(12)>", "<(12),(34)>"), ("<(34)>", "<(12),(34)>"),
                   ("<(12),(34)>", "D4"), ("D4", "S4")]


def subgroup_lattice(F: la.Field, depth: Optional[int] = None) -> DirectedSystem:
    """A non-totally-ordered system: subgroups of S4 with two incomparable order-2 stages."""
    S4 = gr.symmetric(4)
    pos = {perm: i for i, perm in enumerate(S4.elements)}
    members = {sid: S4.closure([pos[g] for g in gens]) for sid, gens in _LATTICE.items()}

    def build(sid):
        G, _ = S4.subgroup(members[sid], name=sid)
        return _group_stage(sid, G, F, sid)

    def cover(sys, lo, hi):
        small, big = members[lo], members[hi]
        where = {g: i for i, g in enumerate(big)}
        elems = [where[g] for g in small]
        K = sys.stage(hi).group
        inc = group_inclusion(K, elems, F, B=sys.stage(lo).algebra, A=sys.stage(hi).algebra)
        return Cover(lo, hi, inc, witness_kind="coset", coset_data=(K, elems))

    ids = list(_LATTICE)
    covers = list(_LATTICE_COVERS)
    if depth is not None:
        levels = {"1": 0, "<(12)>": 1, "<(34)>": 1, "<(12),(34)>": 2, "D4": 3, "S4": 4}
        ids = [i for i in ids if levels[i] <= depth]
        covers = [(a, b) for a, b in covers if a in ids and b in ids]
    return DirectedSystem("subgroup_lattice(S4)", F, ids, covers, build, cover, base="1",
                          family="subgroup_lattice", params={}, depth=max(depth or 4, 0), unbounded=False)


FAMILIES = ("prufer", "symmetric_chain", "dual_profinite", "subgroup_lattice")


def builtin_system(family: str, params: Mapping, F: la.Field, depth: int) -> DirectedSystem:
    if family == "prufer":
        return prufer(int(params.get("p", 2)), F, depth)
    if family == "symmetric_chain":
        return symmetric_chain(int(params.get("n_max", 4)), F, depth)
    if family == "dual_profinite":
        return dual_profinite(int(params.get("p", 2)), F, depth)
    if family == "subgroup_lattice":
        return subgroup_lattice(F, depth)
    raise ValueError(f"unknown family {family!r}; known: {list(FAMILIES)}")


def custom_system(F: la.Field, stages: Sequence[tuple[str, Algebra, np.ndarray]],
                  inclusions: Sequence[tuple[str, str, np.ndarray]], name: str = "custom") -> DirectedSystem:
    """Explicit stages ``(id, algebra, form)`` and covering inclusions ``(lo, hi, matrix)``."""
    table = {sid: (a, form) for sid, a, form in stages}
    mats = {(lo, hi): M for lo, hi, M in inclusions}

    def build(sid):
        a, form = table[sid]
        return Stage(sid, a, frobenius_data(a, form, require_symmetric=True), label=sid)

    def cover(sys, lo, hi):
        return Cover(lo, hi, AlgebraMorphism(sys.stage(lo).algebra, sys.stage(hi).algebra, mats[(lo, hi)]))

    return DirectedSystem(name, F, [s[0] for s in stages], list(mats), build, cover, family="custom",
                          depth=len(stages) - 1)


# ---------------------------------------------------------------------------
# colimit elements


@dataclass(frozen=True, eq=False)
class ColimElement:
    stage: str
    vector: np.ndarray

    def __repr__(self):
        return f"ColimElement({self.stage}, {list(self.vector)})"


def element(sys: DirectedSystem, stage: str, coeffs) -> ColimElement:
    return ColimElement(stage, sys.stage(stage).algebra.element(coeffs))


def push(sys: DirectedSystem, e: ColimElement, mu: str) -> ColimElement:
    if not sys.leq(e.stage, mu):
        raise NotComparable(f"stage {mu} is not above {e.stage}")
    v = e.vector
    for a, b in sys.path(e.stage, mu):
        v = sys.cover(a, b).inclusion(v)
    return ColimElement(mu, v)


def colim_mul(sys: DirectedSystem, e1: ColimElement, e2: ColimElement) -> ColimElement:
    mu = sys.upper_bound(e1.stage, e2.stage)
    a = sys.stage(mu).algebra
    x, y = push(sys, e1, mu).vector, push(sys, e2, mu).vector
    return ColimElement(mu, sys.field.matmul(sys.field.tensordot(x, a.L, 1), y))


def colim_add(sys: DirectedSystem, e1: ColimElement, e2: ColimElement) -> ColimElement:
    mu = sys.upper_bound(e1.stage, e2.stage)
    return ColimElement(mu, sys.field.add(push(sys, e1, mu).vector, push(sys, e2, mu).vector))


def colim_eq(sys: DirectedSystem, e1: ColimElement, e2: ColimElement) -> bool:
    mu = sys.upper_bound(e1.stage, e2.stage)
    return bool(np.array_equal(push(sys, e1, mu).vector, push(sys, e2, mu).vector))


# ---------------------------------------------------------------------------
# coherent modules


@dataclass(frozen=True, eq=False)
class CoherentModule:
    """The A-module ``A (x)_{A(stage)} module``."""

    stage: str
    module: FDModule


def induce_along(sys: DirectedSystem, m: FDModule, lo: str, hi: str) -> FDModule:
    for a, b in sys.path(lo, hi):
        m = induce(sys.free_basis(a, b), m)
    return m


def induce_hom_along(sys: DirectedSystem, phi: np.ndarray, lo: str, hi: str) -> np.ndarray:
    for a, b in sys.path(lo, hi):
        phi = induce_hom(sys.free_basis(a, b), phi)
    return phi


def represent(sys: DirectedSystem, m: CoherentModule, mu: str) -> CoherentModule:
    """The same coherent module presented at a higher stage."""
    return CoherentModule(mu, induce_along(sys, m.module, m.stage, mu))


def coherent_dim(sys: DirectedSystem, m: CoherentModule) -> Fraction:
    return Fraction(m.module.dim, sys.stage(m.stage).dim)


def cohdim_invariance(sys: DirectedSystem, m: CoherentModule) -> dict[str, Fraction]:
    """cohdim recomputed after re-presenting at every stage above the presentation stage."""
    return {mu: coherent_dim(sys, represent(sys, m, mu)) for mu in sys.above(m.stage)}


@dataclass(frozen=True, eq=False)
class CoherentRank:
    value: Fraction
    cover: FreeCover | ModuleHom
    exact: bool
    method: str


def coherent_rank(sys: DirectedSystem, m: CoherentModule, strict: bool = False) -> CoherentRank:
    """cohrk at a local stage (g = dim M/JM) or a semisimple stage (the module covers itself).

    Other stages get the free-cover upper bound flagged ``exact=False``, or
    ``UnsupportedStage`` when ``strict``.
    """
    a = sys.stage(m.stage).algebra
    mod = m.module
    if is_semisimple(a):
        ident = ModuleHom(mod, mod, sys.field.eye(mod.dim))
        return CoherentRank(coherent_dim(sys, m), ident, True, "semisimple")
    if is_local(a):
        g = mod.dim - radical_submodule(mod).shape[0]
        cov = free_cover(mod)
        assert cov.rank == g
        return CoherentRank(Fraction(g), cov, True, "local")
    if strict:
        raise UnsupportedStage(f"stage {m.stage} is neither local nor semisimple")
    cov = free_cover(mod)
    return CoherentRank(Fraction(cov.rank), cov, False, "free-cover bound")


def _is_exact(f: ModuleHom, g: ModuleHom) -> Optional[str]:
    F = f.source.field
    if not (f.is_intertwiner() and g.is_intertwiner()):
        return "maps are not module homomorphisms"
    if la.rank(F, f.matrix) != f.source.dim:
        return "first map is not injective"
    if la.rank(F, g.matrix) != g.target.dim:
        return "second map is not surjective"
    if not F.is_zero(F.matmul(g.matrix, f.matrix)):
        return "composite is not zero"
    if f.source.dim + g.target.dim != f.target.dim:
        return "image of the first map is not the kernel of the second"
    return None


@dataclass(frozen=True, eq=False)
class ShortExactSequence:
    stage: str
    f: ModuleHom
    g: ModuleHom

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.f.source.dim, self.f.target.dim, self.g.target.dim


def ses(stage: str, f: ModuleHom, g: ModuleHom) -> ShortExactSequence:
    problem = _is_exact(f, g)
    if problem:
        raise NotExact(problem)
    return ShortExactSequence(stage, f, g)


def lift_ses(sys: DirectedSystem, s: ShortExactSequence, mu: str) -> ShortExactSequence:
    """Induce a short exact sequence to a higher stage and re-check exactness."""
    modules = [induce_along(sys, x, s.stage, mu) for x in (s.f.source, s.f.target, s.g.target)]
    f = ModuleHom(modules[0], modules[1], induce_hom_along(sys, s.f.matrix, s.stage, mu))
    g = ModuleHom(modules[1], modules[2], induce_hom_along(sys, s.g.matrix, s.stage, mu))
    return ses(mu, f, g)


def _descend_map(sys, m: FDModule, n: FDModule, target: np.ndarray, alpha: str, mu: str) -> np.ndarray:
    F = sys.field
    H = hom_space(m, n)
    if H.shape[0] == 0:
        if F.is_zero(target):
            return F.zeros(n.dim, m.dim)
        raise NotInduced("map is not induced from the presentation stage")
    imgs = np.stack([induce_hom_along(sys, h, alpha, mu).reshape(-1) for h in H])
    coeff, _ = la.solve(F, imgs.T, target.reshape(-1))
    if coeff is None:
        raise NotInduced("map is not induced from the presentation stage")
    return F.tensordot(coeff, H, 1)


def descend_ses(sys: DirectedSystem, l: CoherentModule, m: CoherentModule, n: CoherentModule,
                f_mu: np.ndarray, g_mu: np.ndarray, mu: str) -> ShortExactSequence:
    """Given maps at ``mu`` between re-presentations of three modules presented at one
    stage α, check exactness at ``mu``, find the maps at α they are induced from,
    and verify exactness at α."""
    alpha = l.stage
    if not (m.stage == alpha == n.stage):
        raise ValueError("all three modules must be presented at the same stage")
    L, M, N = (represent(sys, x, mu).module for x in (l, m, n))
    problem = _is_exact(ModuleHom(L, M, f_mu), ModuleHom(M, N, g_mu))
    if problem:
        raise NotExact(f"at stage {mu}: {problem}")
    f = _descend_map(sys, l.module, m.module, f_mu, alpha, mu)
    g = _descend_map(sys, m.module, n.module, g_mu, alpha, mu)
    problem = _is_exact(ModuleHom(l.module, m.module, f), ModuleHom(m.module, n.module, g))
    if problem:
        raise NotExact(f"at stage {alpha}: {problem}")
    return ShortExactSequence(alpha, ModuleHom(l.module, m.module, f), ModuleHom(m.module, n.module, g))


@dataclass(frozen=True)
class GrowthTable:
    rows: tuple[tuple[str, int], ...]
    strictly_increasing: bool


def stage_dim_growth(sys: DirectedSystem, stage: str, ideal: np.ndarray) -> GrowthTable:
    """``dim A(μ) - dim A(μ) L`` for every μ ≽ stage; strict growth is checked along covers."""
    F = sys.field
    if la.row_space(F, ideal, sys.stage(stage).dim).shape[0] == sys.stage(stage).dim:
        raise ValueError("L must be a proper left ideal")
    rows = {}
    for mu in sys.above(stage):
        inc = sys.inclusion(stage, mu)
        pushed = F.matmul(ideal, inc.matrix.T) if ideal.shape[0] else F.zeros(0, sys.stage(mu).dim)
        rows[mu] = sys.stage(mu).dim - generated_ideal(sys.stage(mu).algebra, pushed, Side.LEFT).shape[0]
    strict = all(rows[lo] < rows[hi] for lo, hi in sys.covers if lo in rows and hi in rows)
    return GrowthTable(tuple((mu, rows[mu]) for mu in sys.above(stage)), strict)


# ---------------------------------------------------------------------------
# witness searches


@dataclass(frozen=True, eq=False)
class Subsystem:
    """``B(λ) ⊆ A(λ)`` per stage, as subspace bases."""

    bases: Mapping[str, np.ndarray]


def whole_system(sys: DirectedSystem) -> Subsystem:
    return Subsystem({i: sys.field.eye(sys.stage(i).dim) for i in sys.ids})


def subsystem_from_stage(sys: DirectedSystem, stage: str) -> Subsystem:
    """B = the image of A(stage) in every stage above it, and the ground field elsewhere."""
    F = sys.field
    out = {}
    for i in sys.ids:
        if sys.leq(stage, i):
            out[i] = la.image(F, sys.inclusion(stage, i).matrix)
        else:
            out[i] = la.row_space(F, sys.stage(i).algebra.unit.reshape(1, -1), sys.stage(i).dim)
    return Subsystem(out)


@dataclass(frozen=True, eq=False)
class EssentialityWitness:
    stage: str
    vector: np.ndarray
    intersection_dim: int


def essentiality_witness(sys: DirectedSystem, z: ColimElement, sub: Subsystem,
                         depth: Optional[int] = None) -> EssentialityWitness:
    """First stage γ ≽ stage(z) where ``A(γ) z ∩ A(γ) B(γ)^+`` is nonzero, with its first basis row."""
    F = sys.field
    if F.is_zero(z.vector):
        raise ValueError("z must be nonzero")
    limit = _depth_limit(sys, z.stage, depth)
    for gamma in sys.above(z.stage):
        if sys.level[gamma] > limit:
            break
        a = sys.stage(gamma).algebra
        zg = push(sys, z, gamma).vector
        cyc = generated_ideal(a, zg.reshape(1, -1), Side.LEFT)
        bplus = la.intersect(F, sub.bases[gamma], a.augmentation_ideal)
        ab = generated_ideal(a, bplus, Side.LEFT)
        inter = la.intersect(F, cyc, ab)
        if inter.shape[0]:
            return EssentialityWitness(gamma, inter[0], inter.shape[0])
    raise NotFoundAtDepth(f"no nonzero intersection up to depth {limit}")


def _depth_limit(sys: DirectedSystem, start: str, depth: Optional[int]) -> int:
    return max(sys.level.values()) if depth is None else sys.level[start] + depth


@dataclass(frozen=True, eq=False)
class CompatibleFDModule:
    """One carrier with a module structure at every stage, compatible under restriction."""

    dim: int
    structures: Mapping[str, FDModule]
    name: str = ""

    def at(self, stage: str) -> FDModule:
        return self.structures[stage]


def compatible_module(sys: DirectedSystem, structures: Mapping[str, FDModule], name: str = "") -> CompatibleFDModule:
    dims = {m.dim for m in structures.values()}
    if len(dims) != 1:
        raise IncompatibleModule("structures have different carrier dimensions")
    for lo, hi in sys.covers:
        if lo in structures and hi in structures:
            res = restrict(sys.cover(lo, hi).inclusion, structures[hi])
            if not np.array_equal(res.action, structures[lo].action):
                raise IncompatibleModule(f"restriction from {hi} to {lo} does not match")
    return CompatibleFDModule(dims.pop(), dict(structures), name)


def trivial_compatible(sys: DirectedSystem) -> CompatibleFDModule:
    return compatible_module(sys, {i: trivial_module(sys.stage(i).algebra) for i in sys.ids}, "k")


def sign_compatible(sys: DirectedSystem) -> CompatibleFDModule:
    """The sign representation along a symmetric chain."""
    F = sys.field
    out = {}
    for i in sys.ids:
        st = sys.stage(i)
        signs = [F(_perm_sign(p)) for p in st.group.elements]
        out[i] = FDModule(st.algebra, F.array(signs).reshape(-1, 1, 1), name="sign")
    return compatible_module(sys, out, "sign")


def _perm_sign(p: tuple) -> int:
    inversions = sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j])
    return -1 if inversions % 2 else 1


def compatible_direct_sum(ms: Sequence[CompatibleFDModule]) -> CompatibleFDModule:
    stages = set.intersection(*(set(m.structures) for m in ms))
    return CompatibleFDModule(sum(m.dim for m in ms),
                              {i: direct_sum([m.at(i) for m in ms]) for i in stages},
                              "+".join(m.name for m in ms))


def cyclic_unipotent_compatible(sys: DirectedSystem, matrix: np.ndarray, top: str) -> CompatibleFDModule:
    """On a prufer system: the generator of stage ``top`` acts by ``matrix``; lower
    stages act through powers.  Stages above ``top`` are left out."""
    F = sys.field
    out = {}
    for i in sys.ids:
        if not sys.leq(i, top):
            continue
        st = sys.stage(i)
        k = int(top) - int(i)
        step = _mat_power(F, matrix, sys.params["p"] ** k)
        mats = [_mat_power(F, step, x) for x in range(st.dim)]
        out[i] = FDModule(st.algebra, np.stack(mats), name="N")
    return compatible_module(sys, out, "N")


def _mat_power(F, m: np.ndarray, e: int) -> np.ndarray:
    out = F.eye(m.shape[0])
    for _ in range(e):
        out = F.matmul(out, m)
    return out


@dataclass(frozen=True, eq=False)
class NoncoherenceWitness:
    stage: str
    element: int  # basis index of A(stage)
    vector: np.ndarray  # v in the embedded copy; element * v escapes
    image_stage: str
    embedded: np.ndarray


def noncoherence_witness(sys: DirectedSystem, s: CompatibleFDModule, alpha: str,
                         depth: Optional[int] = None) -> NoncoherenceWitness:
    """Embed ``S`` into ``A(α)``, push the image upward and return the first basis element
    ``a`` of a higher stage with ``a v`` outside the image."""
    F = sys.field
    sa = s.at(alpha)
    a_alpha = sys.stage(alpha).algebra
    H = hom_space(sa, regular_module(a_alpha))
    emb = next((h for h in H if la.rank(F, h) == sa.dim), None)
    if emb is None:
        raise NotFoundAtDepth(f"module does not embed in A({alpha})")
    image = la.image(F, emb)
    limit = _depth_limit(sys, alpha, depth)
    for beta in sys.above(alpha, strict=True):
        if sys.level[beta] > limit:
            break
        A = sys.stage(beta).algebra
        pushed = la.row_space(F, F.matmul(image, sys.inclusion(alpha, beta).matrix.T), A.dim)
        prods = products(A, F.eye(A.dim), pushed).reshape(A.dim, pushed.shape[0], A.dim)
        for ai in range(A.dim):
            for vi in range(pushed.shape[0]):
                if not la.membership(F, prods[ai, vi], pushed):
                    return NoncoherenceWitness(beta, ai, pushed[vi], alpha, pushed)
    raise NotFoundAtDepth(f"embedded copy is stable up to depth {limit}")


@dataclass(frozen=True, eq=False)
class MinimalIdealDescent:
    stage: str
    ideal: Ideal
    induced_simple: dict[str, bool]


def minimal_ideal_descend(sys: DirectedSystem, w: ColimElement, depth: Optional[int] = None,
                          ascent: int = 2) -> MinimalIdealDescent:
    """First stage λ ≽ stage(w) where ``A(λ) w`` is a proper simple left ideal.

    Simplicity of the induced module at the next ``ascent`` stages is recorded
    as data; it is not a requirement.
    """
    limit = _depth_limit(sys, w.stage, depth)
    reasons = []
    for lam in sys.above(w.stage):
        if sys.level[lam] > limit:
            break
        a = sys.stage(lam).algebra
        basis = generated_ideal(a, push(sys, w, lam).vector.reshape(1, -1), Side.LEFT)
        if basis.shape[0] == a.dim:
            reasons.append(f"{lam}: generates the whole stage")
            continue
        if basis.shape[0] == 0:
            reasons.append(f"{lam}: zero")
            continue
        ideal = Ideal(a, Side.LEFT, basis)
        if not isinstance(is_simple(ideal_module(ideal)), Simple):
            reasons.append(f"{lam}: not simple")
            continue
        induced = {}
        mod = ideal_module(ideal)
        for mu in sys.above(lam, strict=True):
            if sys.level[mu] > sys.level[lam] + ascent:
                break
            induced[mu] = isinstance(is_simple(induce_along(sys, mod, lam, mu)), Simple)
        return MinimalIdealDescent(lam, ideal, induced)
    raise NotFoundAtDepth("; ".join(reasons) or "no stages within depth")


@dataclass(frozen=True, eq=False)
class HomTower:
    stages: tuple[str, ...]
    dims: tuple[int, ...]
    spaces: tuple[np.ndarray, ...]  # subspaces of the linear maps (flattened)
    restriction_inclusions: tuple[bool, ...]
    stable: bool

    @property
    def limit_dim(self) -> int:
        return self.dims[-1]


def hom_tower(sys: DirectedSystem, m: CompatibleFDModule, n: CompatibleFDModule,
              depth: Optional[int] = None) -> HomTower:
    """``Hom_{A(λ)}(M, N)`` along a chain of stages, as subspaces of all linear maps."""
    F = sys.field
    stages = [i for i in sys.ids if i in m.structures and i in n.structures]
    chain = sorted(stages, key=sys.sort_key)
    if depth is not None:
        chain = [i for i in chain if sys.level[i] <= depth]
    spaces, dims = [], []
    for i in chain:
        H = hom_space(m.at(i), n.at(i))
        flat = la.row_space(F, H.reshape(H.shape[0], -1), m.dim * n.dim) if H.shape[0] else F.zeros(0, m.dim * n.dim)
        spaces.append(flat)
        dims.append(flat.shape[0])
    incl = tuple(la.contains(F, spaces[k], spaces[k + 1]) for k in range(len(spaces) - 1))
    stable = len(dims) >= 3 and dims[-1] == dims[-2] == dims[-3]
    return HomTower(tuple(chain), tuple(dims), tuple(spaces), incl, stable)


def is_local_system(sys: DirectedSystem) -> bool:
    return all(is_local(sys.stage(i).algebra) for i in sys.ids)


def radical_containment_check(sys: DirectedSystem, depth: Optional[int] = None) -> Report:
    """``A(α) ∩ rad A(β) ⊆ rad A(α)`` on every covering pair; data records equality."""
    F = sys.field
    rep = Report("radical-containment")
    equal = {}
    for lo, hi in sys.covers:
        if depth is not None and sys.level[hi] > depth:
            continue
        inc = sys.cover(lo, hi).inclusion
        rad_hi = sys.stage(hi).algebra.radical.basis
        rad_lo = sys.stage(lo).algebra.radical.basis
        # x in A(α) with ι(x) in rad A(β): kernel of ι composed with the quotient by rad
        proj, _ = la.quotient_projection(F, rad_hi)
        pulled = la.kernel(F, F.matmul(proj, inc.matrix))
        if not la.contains(F, rad_lo, pulled):
            rep.fail(f"pair ({lo}, {hi}): A(α) ∩ rad A(β) is not inside rad A(α)")
        equal[f"{lo}<{hi}"] = la.same_subspace(F, rad_lo, pulled)
    rep.data["equal"] = equal
    return rep


@dataclass(frozen=True, eq=False)
class FinitePresentation:
    """``A^r -> A^g -> N -> 0`` for the submodule N generated by the given vectors."""

    submodule: np.ndarray  # basis of N inside the ambient module
    generators: np.ndarray  # generators of N, ambient coordinates
    relations: np.ndarray  # module generators of the kernel, in A^g coordinates

    @property
    def n_generators(self) -> int:
        return self.generators.shape[0]

    @property
    def n_relations(self) -> int:
        return self.relations.shape[0]


def fp_witness(m: FDModule, vectors: np.ndarray) -> FinitePresentation:
    F = m.field
    n = m.dim
    vectors = np.asarray(vectors).reshape(-1, n)
    span = submodule_generated(m, vectors) if vectors.shape[0] else F.zeros(0, n)
    if span.shape[0] == 0:
        return FinitePresentation(span, F.zeros(0, n), F.zeros(0, 0))
    sub, emb = submodule(m, span)  # emb: (n, k), sub coordinates
    gens_sub = choose_generators(sub, extra=la.coordinates(F, span, vectors))
    cov = free_cover(sub, gens_sub)
    ker_mod, ker_emb = kernel_module(cov.hom())
    rel_gens = choose_generators(ker_mod)
    relations = F.matmul(rel_gens, ker_emb.T) if rel_gens.shape[0] else F.zeros(0, cov.free.dim)
    return FinitePresentation(span, F.matmul(gens_sub, emb.T), relations)
