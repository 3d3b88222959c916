"""Finite groups by multiplication table, with the permutation and cyclic
constructions used as stages of locally finite groups."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np


class GroupAxiomError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group on elements ``0..n-1``; ``table[a, b]`` is the index of ``ab``."""

    table: np.ndarray
    identity: int
    labels: tuple[str, ...]
    name: str = ""
    elements: tuple = field(default=(), repr=False)  # underlying objects, e.g. permutations
    generators: tuple[int, ...] = ()

    @property
    def order(self) -> int:
        return len(self.labels)

    def __len__(self):
        return self.order

    @cached_property
    def inverse(self) -> tuple[int, ...]:
        inv = [0] * self.order
        for a in range(self.order):
            (b,) = np.flatnonzero(self.table[a] == self.identity)
            inv[a] = int(b)
        return tuple(inv)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def validate(self) -> list[str]:
        """Return a list of violated group axioms (empty when the table is a group)."""
        n = self.order
        t = self.table
        problems = []
        if t.shape != (n, n):
            return [f"table shape {t.shape} != ({n}, {n})"]
        e = self.identity
        if not (np.all(t[e] == np.arange(n)) and np.all(t[:, e] == np.arange(n))):
            problems.append("identity law fails")
        for a in range(n):
            if sorted(t[a]) != list(range(n)):
                problems.append(f"row {a} is not a permutation")
                break
        lhs = t[t[:, :, None], np.arange(n)[None, None, :]]  # (ab)c
        rhs = t[np.arange(n)[:, None, None], t[None, :, :]]  # a(bc)
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            a, b, c = bad[0]
            problems.append(f"associativity fails at ({self.labels[a]}, {self.labels[b]}, {self.labels[c]})")
        return problems

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def closure(self, gens: Iterable[int]) -> list[int]:
        """Sorted element indices of the subgroup generated by ``gens``."""
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def is_subgroup(self, elems: Sequence[int]) -> bool:
        s = set(elems)
        if self.identity not in s:
            return False
        return all(self.mul(a, b) in s for a in s for b in s)

    def is_normal(self, elems: Sequence[int]) -> bool:
        s = set(elems)
        inv = self.inverse
        return all(self.mul(self.mul(g, h), inv[g]) in s for g in range(self.order) for h in s)

    def conjugate(self, elems: Sequence[int], g: int) -> tuple[int, ...]:
        inv = self.inverse
        return tuple(sorted(self.mul(self.mul(g, h), inv[g]) for h in elems))

    def subgroup(self, elems: Sequence[int], name: str = "") -> tuple["FiniteGroup", list[int]]:
        """The subgroup on ``elems`` as a group in its own right plus its embedding."""
        elems = sorted(elems)
        if not self.is_subgroup(elems):
            raise GroupAxiomError("elements do not form a subgroup")
        pos = {g: i for i, g in enumerate(elems)}
        table = np.array([[pos[self.mul(a, b)] for b in elems] for a in elems], dtype=np.int64)
        sub = FiniteGroup(
            table=table,
            identity=pos[self.identity],
            labels=tuple(self.labels[g] for g in elems),
            name=name,
            elements=tuple(self.elements[g] for g in elems) if self.elements else (),
        )
        return sub, elems

    def all_subgroups(self) -> list[tuple[int, ...]]:
        """All subgroups, found by closing every pair of elements and joining upward."""
        subs = {tuple(self.closure([a, b])) for a in range(self.order) for b in range(a, self.order)}
        changed = True
        while changed:
            changed = False
            for s, t in itertools.combinations(list(subs), 2):
                j = tuple(self.closure(set(s) | set(t)))
                if j not in subs:
                    subs.add(j)
                    changed = True
        return sorted(subs, key=lambda s: (len(s), s))

    def conjugacy_class_reps(self, subs: Iterable[tuple[int, ...]]) -> list[tuple[int, ...]]:
        reps, seen = [], set()
        for s in subs:
            if s in seen:
                continue
            reps.append(s)
            for g in range(self.order):
                seen.add(self.conjugate(s, g))
        return reps


def from_elements(elements: Sequence[Hashable], op: Callable, identity, name="", label=str,
                  generators: Sequence = ()) -> FiniteGroup:
    elements = list(elements)
    pos = {x: i for i, x in enumerate(elements)}
    table = np.array([[pos[op(a, b)] for b in elements] for a in elements], dtype=np.int64)
    return FiniteGroup(
        table=table,
        identity=pos[identity],
        labels=tuple(label(x) for x in elements),
        name=name,
        elements=tuple(elements),
        generators=tuple(pos[g] for g in generators),
    )


def _compose(p: tuple, q: tuple) -> tuple:
    # (pq)(i) = p(q(i)): apply q first
    return tuple(p[i] for i in q)


def perm_label(p: tuple) -> str:
    """Cycle notation with 1-based points, ``e`` for the identity."""
    seen, cycles = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            seen.add(i)
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(str(j + 1))
            j = p[j]
        cycles.append("(" + "".join(cyc) + ")")
    return "".join(cycles) or "e"


def permutation_group(gens: Sequence[Sequence[int]], degree: int, name="") -> FiniteGroup:
    ident = tuple(range(degree))
    gens = [tuple(g) for g in gens]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    elements = sorted(seen)
    return from_elements(elements, _compose, ident, name=name, label=perm_label, generators=gens)


def symmetric(n: int) -> FiniteGroup:
    """S_n on points 0..n-1; elements sorted lexicographically, so S_{n-1} sits inside fixing n-1."""
    elements = sorted(itertools.permutations(range(n)))
    gens = []
    if n >= 2:
        gens.append(tuple([1, 0] + list(range(2, n))))
    if n >= 3:
        gens.append(tuple(list(range(1, n)) + [0]))
    return from_elements(elements, _compose, tuple(range(n)), name=f"S{n}", label=perm_label, generators=gens)


def cyclic(n: int, symbol: str = "g") -> FiniteGroup:
    def label(k):
        return "e" if k == 0 else (symbol if k == 1 else f"{symbol}^{k}")

    return from_elements(range(n), lambda a, b: (a + b) % n, 0, name=f"C{n}", label=label,
                         generators=[1] if n > 1 else [])


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n acting on an n-gon."""
    r = tuple((i + 1) % n for i in range(n))
    s = tuple((-i) % n for i in range(n))
    return permutation_group([r, s], n, name=f"D{n}")


def quaternion() -> FiniteGroup:
    """Q8 as pairs (sign, unit) with unit in {1, i, j, k}."""
    mult = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elements = [(s, u) for s in (1, -1) for u in "1ijk"]

    def op(a, b):
        sgn, u = mult[(a[1], b[1])]
        return (a[0] * b[0] * sgn, u)

    def label(x):
        return ("" if x[0] == 1 else "-") + x[1]

    return from_elements(elements, op, (1, "1"), name="Q8", label=label, generators=[(1, "i"), (1, "j")])


def direct_product(g: FiniteGroup, h: FiniteGroup, name="") -> FiniteGroup:
    elements = [(a, b) for a in range(g.order) for b in range(h.order)]

    def op(x, y):
        return (g.mul(x[0], y[0]), h.mul(x[1], y[1]))

    gens = [(a, h.identity) for a in g.generators] + [(g.identity, b) for b in h.generators]
    return from_elements(elements, op, (g.identity, h.identity), name=name or f"{g.name}x{h.name}",
                         label=lambda x: f"({g.labels[x[0]]},{h.labels[x[1]]})", generators=gens)


def trivial() -> FiniteGroup:
    return cyclic(1)


NAMED = {
    "C1": lambda: cyclic(1),
    "C2": lambda: cyclic(2),
    "C3": lambda: cyclic(3),
    "C4": lambda: cyclic(4),
    "C5": lambda: cyclic(5),
    "C6": lambda: cyclic(6),
    "C7": lambda: cyclic(7),
    "C8": lambda: cyclic(8),
    "C2xC2": lambda: direct_product(cyclic(2), cyclic(2, "h")),
    "C2xC4": lambda: direct_product(cyclic(2), cyclic(4, "h")),
    "C2xC2xC2": lambda: direct_product(direct_product(cyclic(2), cyclic(2, "h")), cyclic(2, "k"), name="C2^3"),
    "S1": lambda: symmetric(1),
    "S2": lambda: symmetric(2),
    "S3": lambda: symmetric(3),
    "S4": lambda: symmetric(4),
    "D4": lambda: dihedral(4),
    "Q8": quaternion,
}


def named_group(name: str) -> FiniteGroup:
    try:
        return NAMED[name]()
    except KeyError:
        raise ValueError(f"unknown group {name!r}; known: {sorted(NAMED)}") from None
