"""Named verification suites over a directed system; each check yields one record."""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterator, Optional

import numpy as np

from . import algcore as ac
from . import exactla as la
from . import groups as gr
from . import hopfcore as hc
from . import repmod as rm
from . import system as sy
from .frobext import (coset_witness, free_basis, group_inclusion, ind_coind_iso, induce, left_coset_reps,
                      restrict, verify_witness)

PASS, FAIL, NOT_FOUND, UNKNOWN = "pass", "fail", "not-found-at-depth", "unknown"


@dataclass
class Record:
    id: str
    anchor: str
    status: str
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"id": self.id, "anchor": self.anchor, "status": self.status, "data": jsonable(self.data)}


def jsonable(x) -> Any:
    """Plain JSON values; Fractions become "p/q" strings, numpy scalars become ints."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if x is None or isinstance(x, (str, float)):
        return x
    return str(x)


def check(cid: str, anchor: str, ok: bool, **data) -> Record:
    return Record(cid, anchor, PASS if ok else FAIL, data)


def rng_for(seed: int, *keys) -> np.random.Generator:
    """Independent stream per check, stable across runs and check orderings."""
    return np.random.default_rng([seed] + [zlib.crc32(str(k).encode()) for k in keys])


def _vec(F, v) -> list:
    return [F.format(x) for x in v]


GROUP_FAMILIES = ("prufer", "symmetric_chain", "subgroup_lattice")


def stage_kind(sys: sy.DirectedSystem) -> str:
    """"group" for group algebras, "function" for function algebras, else "other"."""
    if sys.family in GROUP_FAMILIES:
        return "group"
    return "function" if sys.family == "dual_profinite" else "other"


# ---------------------------------------------------------------------------
# frobenius


def frobenius_suite(sys: sy.DirectedSystem, seed: int, params: dict) -> Iterator[Record]:
    F = sys.field
    for i in sys.ids:
        st = sys.stage(i)
        yield from _frobenius_checks(f"frobenius/stage:{i}", st.algebra, st.frobenius, st, F, stage_kind(sys))
    for gname in params.get("groups", []):
        for fname in params.get("fields", [F.name]):
            G = gr.named_group(gname)
            K = la.field_from_name(fname)
            a, h, fd = hc.group_algebra(G, K)
            st = sy.Stage(gname, a, fd, h, G, gname)
            yield from _frobenius_checks(f"frobenius/{gname}/{K.name}", a, fd, st, K, "group")
    if params.get("field_product", True):
        yield from field_product_checks()


def _frobenius_checks(prefix: str, a: ac.Algebra, fd: ac.FrobeniusData, st: sy.Stage, F,
                      kind: str) -> Iterator[Record]:
    v = ac.validate_algebra(a)
    yield check(f"{prefix}/symmetric-frobenius", "symmetric Frobenius stage", v.ok and fd.symmetric,
                failures=v.failures, symmetric=fd.symmetric)
    dl, dr = ac.left_integrals(a).shape[0], ac.right_integrals(a).shape[0]
    yield check(f"{prefix}/integrals-dim", "left and right integral spaces are one-dimensional",
                dl == dr == 1, left=dl, right=dr)
    yield check(f"{prefix}/unimodular", "unimodularity of group and function algebras",
                ac.is_unimodular(a), value=ac.is_unimodular(a))
    flag = ac.maschke_semisimple(a)
    if kind == "function":
        expected = True  # products of copies of the field
    elif kind == "group":
        order = st.group.order
        expected = F.characteristic == 0 or order % F.characteristic != 0
    else:
        expected = ac.is_semisimple(a)
    yield check(f"{prefix}/maschke", "Maschke criterion via the counit of integrals",
                flag == expected and flag == ac.is_semisimple(a), flag=flag, expected=expected)


def field_product_checks() -> Iterator[Record]:
    F = la.GF(2)
    r0 = ac.algebra_from_group(gr.cyclic(2), F)
    R, fd = ac.field_product_counterexample(F, r0, F.array([1, 0]))
    integral = F.array([1, 0, 0])
    ints = ac.left_integrals(R)
    yield check("frobenius/field-product/form", "product with a local algebra carries a Frobenius form",
                fd.gram.shape == (3, 3) and la.is_invertible(F, fd.gram), dim=R.dim)
    yield check("frobenius/field-product/integral", "the unit of the field factor is a left integral",
                la.membership(F, integral, ints), integrals=[_vec(F, r) for r in ints])
    yield check("frobenius/field-product/not-semisimple", "that algebra is nonetheless not semisimple",
                not ac.is_semisimple(R), radical_dim=R.radical.dim)


# ---------------------------------------------------------------------------
# extensions


def extensions_suite(sys: sy.DirectedSystem, seed: int, params: dict) -> Iterator[Record]:
    samples = int(params.get("samples", 10))
    max_dim = int(params.get("max_module_dim", 6))
    for lo, hi in sys.covers:
        prefix = f"extensions/{lo}<{hi}"
        yield from _extension_checks(prefix, sys.witness(lo, hi), sys.free_basis(lo, hi),
                                     rng_for(seed, prefix), samples, max_dim)
        cov = sys.cover(lo, hi)
        if cov.witness_kind == "coset":
            K, elems = cov.coset_data
            yield _integral_identity(prefix, K, elems, sys.field)
    for gname in params.get("subgroup_pairs", []):
        for fname in params.get("fields", [sys.field.name]):
            yield from subgroup_pair_checks(gname, la.field_from_name(fname), seed, samples, max_dim)


def _extension_checks(prefix, w, fb, rng, samples, max_dim) -> Iterator[Record]:
    inc = w.inclusion
    rep = verify_witness(w)
    yield check(f"{prefix}/witness", "Frobenius extension dual-basis identities", rep.ok, failures=rep.failures)
    ratio = Fraction(inc.target.dim, inc.source.dim)
    yield check(f"{prefix}/free-rank", "free rank equals the dimension ratio", fb.rank == ratio,
                rank=fb.rank, expected=ratio)
    failures = []
    for t in range(samples):
        m = rm.random_module(inc.source, rng, max_dim)
        try:
            ind_coind_iso(w, fb, m)
        except AssertionError as exc:
            failures.append(f"sample {t}: {exc}")
    yield check(f"{prefix}/ind-coind", "coinduction and induction are naturally isomorphic", not failures,
                samples=samples, failures=failures)


def _integral_identity(prefix, K, elems, F) -> Record:
    """(sum of K/H transversal) * (sum of H) = sum of K in F[K]."""
    a = ac.algebra_from_group(K, F)
    reps = left_coset_reps(K, elems)
    left = F.zeros(K.order)
    for k in reps:
        left[k] = F.add(left[k], F.one)
    right = F.zeros(K.order)
    for h in elems:
        right[h] = F.one
    prod = ac.multiply(a, left, right)
    return check(f"{prefix}/integral-identity", "integral of the big group from the subgroup integral",
                 bool(np.array_equal(prod, F.array([1] * K.order))), transversal=[K.labels[k] for k in reps])


def subgroup_pairs(G: gr.FiniteGroup) -> list[tuple[str, tuple[int, ...], tuple[int, ...]]]:
    """Named pairs H ≤ K: K runs over conjugacy-class representatives, H over the classes meeting K."""
    subs = G.all_subgroups()
    reps = G.conjugacy_class_reps(subs)
    cls = {}
    for n, r in enumerate(reps):
        for g in range(G.order):
            cls[G.conjugate(r, g)] = n
    pairs = []
    for K in reps:
        seen = set()
        for H in subs:
            if set(H) <= set(K) and cls[H] not in seen:
                seen.add(cls[H])
                pairs.append((f"H{cls[H]}:{len(H)}<K{cls[K]}:{len(K)}", H, K))
    return pairs


def subgroup_pair_checks(gname: str, F, seed: int, samples: int, max_dim: int) -> Iterator[Record]:
    G = gr.named_group(gname)
    for name, H, K in subgroup_pairs(G):
        Kg, _ = G.subgroup(K)
        where = {g: i for i, g in enumerate(K)}
        elems = [where[h] for h in H]
        prefix = f"extensions/{gname}/{F.name}/{name}"
        w = coset_witness(Kg, elems, F)
        fb = free_basis(w.inclusion)
        yield from _extension_checks(prefix, w, fb, rng_for(seed, prefix), samples, max_dim)
        yield _integral_identity(prefix, Kg, elems, F)


# ---------------------------------------------------------------------------
# coherent


def coherent_suite(sys: sy.DirectedSystem, seed: int, params: dict) -> Iterator[Record]:
    F = sys.field
    samples = int(params.get("samples", 10))
    rng = rng_for(seed, "coherent")
    modules = []
    for i in sys.ids:
        if i == sys.base:
            continue
        a = sys.stage(i).algebra
        modules += [(f"trivial@{i}", sy.CoherentModule(i, rm.trivial_module(a))),
                    (f"regular@{i}", sy.CoherentModule(i, rm.regular_module(a)))]
    nonbase = [i for i in sys.ids if i != sys.base]
    for t in range(samples):
        i = nonbase[int(rng.integers(0, len(nonbase)))]
        modules.append((f"random{t}@{i}", sy.CoherentModule(i, rm.random_module(sys.stage(i).algebra, rng, 6))))
    for name, m in modules:
        base = sy.coherent_dim(sys, m)
        table = sy.cohdim_invariance(sys, m)
        yield check(f"coherent/cohdim/{name}", "coherent dimension is independent of the presentation stage",
                    all(v == base for v in table.values()), cohdim=base, restaged=table)
        r = sy.coherent_rank(sys, m)
        yield check(f"coherent/cohrk/{name}", "coherent rank bounds coherent dimension", r.value >= base,
                    cohrk=r.value, cohdim=base, exact=r.exact, method=r.method)
    lower = [i for i in nonbase if sys.above(i, strict=True)]
    for t in range(samples):
        i = lower[int(rng.integers(0, len(lower)))] if lower else sys.base
        a = sys.stage(i).algebra
        for _ in range(50):
            v = F.random(rng, a.dim)
            ideal = ac.generated_ideal(a, v.reshape(1, -1), ac.Side.LEFT)
            if 0 < ideal.shape[0] < a.dim:
                break
        else:
            ideal = F.zeros(0, a.dim)
        g = sy.stage_dim_growth(sys, i, ideal)
        yield check(f"coherent/growth/{t}@{i}", "quotients by induced proper ideals grow strictly",
                    g.strictly_increasing, ideal_dim=ideal.shape[0], dims=dict(g.rows))


# ---------------------------------------------------------------------------
# ideals


def algebra_catalog(F) -> list[ac.Algebra]:
    """Small algebras for the brute-force radical comparison (all of dim <= 8)."""
    out = [ac.ground_field(F)]
    for name in ["C2", "C3", "C4", "C5", "C6", "C7", "C8", "C2xC2", "C2xC4", "C2xC2xC2", "S3", "D4", "Q8"]:
        out.append(ac.algebra_from_group(gr.named_group(name), F))
    for n in (2, 3, 4):
        out.append(ac.truncated_polynomial(F, n))
    out += [ac.dual_numbers_2(F), ac.upper_triangular(F), ac.matrix_algebra_times_field(F, 2)]
    out.append(hc.dual_function_algebra(gr.cyclic(4), F)[0])
    out.append(ac.product_algebra(ac.truncated_polynomial(F, 2), ac.upper_triangular(F)))
    r0 = ac.algebra_from_group(gr.cyclic(F.characteristic or 2), F)
    if not ac.is_semisimple(r0):
        out.append(ac.field_product_counterexample(F, r0, F.unit_vector(r0.dim, 0))[0])
    return out


def minimal_left_ideals(a: ac.Algebra, rng, want: int = 5, attempts: int = 40) -> list[ac.Ideal]:
    """Distinct minimal left ideals found by shrinking random cyclic ideals."""
    F = a.field
    found: dict[bytes, ac.Ideal] = {}
    reg = rm.regular_module(a)
    for _ in range(attempts):
        if len(found) >= want:
            break
        v = F.random(rng, a.dim)
        if F.is_zero(v):
            continue
        basis = ac.generated_ideal(a, v.reshape(1, -1), ac.Side.LEFT)
        while True:
            sub, emb = rm.submodule(reg, basis)
            verdict = rm.is_simple(sub, rng=rng)
            if isinstance(verdict, rm.Simple):
                key = basis.astype(str).tobytes() + bytes(basis.shape)
                found.setdefault(key, ac.Ideal(a, ac.Side.LEFT, basis))
                break
            if not isinstance(verdict, rm.NotSimple):
                break
            wit = F.matmul(verdict.witness, emb.T)
            y = F.matmul(F.random(rng, wit.shape[0]).reshape(1, -1), wit)
            if F.is_zero(y):
                y = wit[:1]
            basis = ac.generated_ideal(a, y, ac.Side.LEFT)
    return [found[k] for k in sorted(found)]


def dichotomy_algebras(F) -> list[ac.Algebra]:
    """Non-local algebras with several minimal left ideals of both kinds."""
    out = [ac.upper_triangular(F), ac.matrix_algebra_times_field(F, 2)]
    out.append(ac.algebra_from_group(gr.symmetric(3), F))
    return out


def _dichotomy_record(cid: str, a: ac.Algebra, ideal: ac.Ideal) -> Record:
    F = a.field
    res = ac.minimal_ideal_dichotomy(ideal, check_minimal=False)
    sq = isinstance(res, ac.SquareZero)
    ok = sq == (la.rank(F, ac.products(a, ideal.basis, ideal.basis)) == 0)
    data = {"branch": "square-zero" if sq else "idempotent", "dim": ideal.dim}
    if not sq:
        e = res.e
        ok = ok and bool(np.array_equal(ac.multiply(a, e, e), e)) and la.same_subspace(
            F, ac.generated_ideal(a, e.reshape(1, -1), ac.Side.LEFT), ideal.basis)
        data["e"] = _vec(F, e)
    return check(cid, "a minimal left ideal squares to zero or is generated by an idempotent", ok, **data)


def ideals_suite(sys: sy.DirectedSystem, seed: int, params: dict) -> Iterator[Record]:
    F = sys.field
    want = int(params.get("minimal_ideals", 5))
    for fname in params.get("catalog_fields", []):
        K = la.field_from_name(fname)
        for a in algebra_catalog(K):
            algo = a.radical.basis
            brute = ac.radical_bruteforce(a)
            yield check(f"ideals/radical/{K.name}/{a.name}", "radical agrees with an exhaustive nilpotent-ideal search",
                        algo.shape == brute.shape and bool(np.array_equal(algo, brute)), dim=a.dim, radical_dim=algo.shape[0])
    rng = rng_for(seed, "ideals")
    for i in sys.ids:
        a = sys.stage(i).algebra
        if a.dim <= 8 and not F.is_rational:
            brute = ac.radical_bruteforce(a)
            yield check(f"ideals/radical/stage:{i}", "radical agrees with an exhaustive nilpotent-ideal search",
                        bool(np.array_equal(a.radical.basis, brute)) and a.radical.dim == brute.shape[0],
                        radical_dim=a.radical.dim)
        sl, sr = ac.socle(a, ac.Side.LEFT).basis, ac.socle(a, ac.Side.RIGHT).basis
        yield check(f"ideals/socle/stage:{i}", "left and right socles agree on symmetric stages",
                    sl.shape == sr.shape and bool(np.array_equal(sl, sr)), dim=sl.shape[0])
    # local stages have a single minimal left ideal, so a few extra algebras join the fixture;
    # the exact simplicity test is quadratic in dim A, hence the size cap
    cap = int(params.get("dichotomy_max_dim", 12))
    fixture = [(f"stage:{i}", sys.stage(i).algebra) for i in sys.ids if sys.stage(i).dim <= cap]
    skipped = [i for i in sys.ids if sys.stage(i).dim > cap]
    fixture += [(f"extra:{a.name}", a) for a in dichotomy_algebras(F)]
    total = 0
    failures = []
    for where, a in fixture:
        for n, ideal in enumerate(minimal_left_ideals(a, rng, want)):
            rec = _dichotomy_record(f"ideals/dichotomy/{where}/{n}", a, ideal)
            total += 1
            if rec.status != PASS:
                failures.append(rec.id)
            yield rec
    yield check("ideals/dichotomy/count", "enough minimal ideals examined", total >= want and not failures,
                total=total, failures=failures, skipped_stages=skipped)
    rc = sy.radical_containment_check(sys)
    yield check("ideals/radical-containment", "a stage meets the radical of a larger stage inside its own radical",
                rc.ok, failures=rc.failures, equal=rc.data["equal"])


# ---------------------------------------------------------------------------
# homological


def homological_suite(sys: sy.DirectedSystem, seed: int, params: dict) -> Iterator[Record]:
    F = sys.field
    samples = int(params.get("samples", 10))
    max_deg = int(params.get("max_ext_degree", 4))
    max_dim = int(params.get("max_module_dim", 5))
    first = sys.above(sys.base, strict=True)[0]
    a1 = sys.stage(first).algebra
    k = rm.trivial_module(a1)
    dims = rm.ext(k, k, max_deg)
    st = sys.stage(first)
    known = [1] * (max_deg + 1) if (stage_kind(sys) == "group" and st.group.order == 2
                                    and F.characteristic == 2) else None
    stable = [rm.stable_hom(_omega_power(k, i), k).dim for i in range(1, max_deg + 1)]
    ok = dims[1:] == stable and (known is None or dims == known)
    yield check(f"homological/ext-kk@{first}", "Ext of the trivial module via syzygies", ok,
                ext=dims, stable=stable, expected=known)
    for lo, hi in sys.covers:
        if lo == sys.base:
            continue
        prefix = f"homological/ext-free/{lo}<{hi}"
        rng = rng_for(seed, prefix)
        target = restrict(sys.inclusion(lo, hi), rm.regular_module(sys.stage(hi).algebra))
        bad = []
        for t in range(samples):
            m = rm.random_module(sys.stage(lo).algebra, rng, max_dim)
            e = rm.ext(m, target, 2)
            if e[1] or e[2]:
                bad.append({"sample": t, "ext": e})
        yield check(prefix, "Ext into a larger stage vanishes in positive degrees", not bad, failures=bad)
    stage = params.get("stage")
    stage = str(stage) if stage is not None else _stage_at_level(sys, 2)
    a = sys.stage(stage).algebra
    fd = sys.stage(stage).frobenius
    rng = rng_for(seed, "homological/pairs", stage)
    bad = []
    for t in range(samples):
        m, n = rm.random_module(a, rng, max_dim), rm.random_module(a, rng, max_dim)
        e1 = rm.ext(m, n, 1)[1]
        sh = rm.stable_hom(rm.omega(m), n).dim
        if e1 != sh:
            bad.append({"sample": t, "ext1": e1, "stable": sh})
    yield check(f"homological/ext1-stable@{stage}", "Ext^1 equals stable maps out of the syzygy", not bad,
                failures=bad, samples=samples)
    bad = []
    for t in range(samples):
        m = rm.random_module(a, rng, max_dim)
        back = rm.mho(rm.omega(m), fd)
        try:
            ok = rm.stably_isomorphic(back, m, rng=rng)
        except rm.Inconclusive:
            ok = None
        if not ok:
            bad.append({"sample": t, "dims": [m.dim, back.dim], "verdict": ok})
    yield check(f"homological/mho-omega@{stage}", "cosyzygy inverts syzygy stably", not bad, failures=bad)
    bad = []
    for t in range(samples):
        m = rm.random_module(a, rng, max_dim)
        cov = rm.free_cover(m)
        extra = F.random(rng, m.dim).reshape(1, -1)
        cov2 = rm.free_cover(m, np.concatenate([cov.generators, extra]))
        k1 = rm.submodule(cov.free, la.kernel(F, cov.matrix))[0]
        k2 = rm.submodule(cov2.free, la.kernel(F, cov2.matrix))[0]
        left = rm.direct_sum([k1, cov2.free])
        right = rm.direct_sum([k2, cov.free])
        try:
            ok = rm.is_isomorphic(left, right, rng=rng)
        except rm.Inconclusive:
            ok = None
        if not ok:
            bad.append({"sample": t, "verdict": ok})
    yield check(f"homological/schanuel@{stage}", "kernels of two free covers agree up to free summands",
                not bad, failures=bad)


def _omega_power(m: rm.FDModule, i: int) -> rm.FDModule:
    for _ in range(i):
        m = rm.omega(m)
    return m


def _stage_at_level(sys: sy.DirectedSystem, level: int) -> str:
    at = [i for i in sys.ids if sys.level[i] == level]
    if at:
        return sorted(at, key=sys.sort_key)[0]
    return max(sys.ids, key=sys.sort_key)


# ---------------------------------------------------------------------------
# hopf


def hopf_suite(sys: sy.DirectedSystem, seed: int, params: dict) -> Iterator[Record]:
    F = sys.field
    samples = int(params.get("samples", 10))
    for i in sys.ids:
        st = sys.stage(i)
        if st.hopf is None:
            continue
        rep = hc.validate_hopf(st.hopf)
        yield check(f"hopf/axioms/stage:{i}", "Hopf axioms and involutive antipode",
                    rep.ok and rep.data["involutive"], failures=rep.failures)
    for lo, hi in sys.covers:
        slo, shi = sys.stage(lo), sys.stage(hi)
        if slo.hopf is None or shi.hopf is None:
            continue
        inc = sys.cover(lo, hi).inclusion
        q = hc.h_mod_k(shi.hopf, inc, sys.free_basis(lo, hi))
        yield check(f"hopf/h-mod-k/{lo}<{hi}", "H//K is the module induced from the trivial module",
                    q.dim * slo.dim == shi.dim, dim=q.dim)
    for G_name, K_gens in params.get("twisting", [["S3", 3], ["C4", 2]]):
        yield from twisting_checks(G_name, int(K_gens), F, seed, samples)
    for gname, k_order in params.get("quotient_square", [["S3", 3], ["C4", 2]]):
        yield quotient_square_check(gname, int(k_order), F)
    for gname in params.get("normality", ["S3", "S4", "D4"]):
        yield from normality_checks(gname, F)
    if params.get("subhopf", True):
        yield subhopf_check(F)
    for p in params.get("dual_primes", [2, 3]):
        yield dual_identity_check(int(p), F, int(params.get("dual_depth", 3)))
    for gname in params.get("pairing", ["C4", "S3"]):
        G = gr.named_group(gname)
        h1 = hc.group_algebra(G, F)[1]
        h2 = hc.dual_function_algebra(G, F)[1]
        yield check(f"hopf/pairing/{gname}", "group algebra and function algebra are dual Hopf algebras",
                    hc.dual_pairing_check(h1, h2, F.eye(G.order)))


def _subgroup_of_order(G: gr.FiniteGroup, order: int) -> list[int]:
    return sorted(next(s for s in G.all_subgroups() if len(s) == order))


def twisting_checks(gname: str, k_order: int, F, seed: int, samples: int) -> Iterator[Record]:
    G = gr.named_group(gname)
    elems = _subgroup_of_order(G, k_order)
    K, _ = G.subgroup(elems)
    a, h, _ = hc.group_algebra(G, F)
    ak, hk, _ = hc.group_algebra(K, F)
    inc = group_inclusion(G, elems, F, B=ak, A=a)
    fb = free_basis(inc)
    prefix = f"hopf/twisting/{gname}>{k_order}"
    rng = rng_for(seed, prefix)
    bad = []
    for t in range(samples):
        m, n = rm.random_module(a, rng, 4), rm.random_module(ak, rng, 3)
        try:
            hc.twisting_iso(h, fb, hk, m, n)
        except AssertionError as exc:
            bad.append(f"sample {t}: {exc}")
    yield check(prefix, "twisting map between tensor and induced modules is an isomorphism", not bad,
                samples=samples, failures=bad, hopf_inclusion=hc.is_hopf_morphism(inc, hk, h))


def quotient_square_check(gname: str, k_order: int, F) -> Record:
    """(H//K) tensor (H//K) against the module induced from the restriction of H//K."""
    G = gr.named_group(gname)
    elems = _subgroup_of_order(G, k_order)
    a, h, _ = hc.group_algebra(G, F)
    inc = group_inclusion(G, elems, F, A=a)
    fb = free_basis(inc)
    q = hc.h_mod_k(h, inc, fb)
    ok = rm.is_isomorphic(hc.tensor_module(h, q, q), induce(fb, restrict(inc, q)))
    return check(f"hopf/quotient-square/{gname}>{k_order}", "tensor square of H//K is induced from K", ok,
                 dim=q.dim, normal=G.is_normal(elems))


def normality_checks(gname: str, F) -> Iterator[Record]:
    G = gr.named_group(gname)
    a, h, _ = hc.group_algebra(G, F)
    mismatches = []
    for sub in G.all_subgroups():
        inc = group_inclusion(G, sub, F, A=a)
        res = hc.normality_check(h, inc)
        if not res.consistent or res.normal != G.is_normal(sub):
            mismatches.append([G.labels[x] for x in sub])
    yield check(f"hopf/normality/{gname}", "normality equals the equality of the two augmentation ideals",
                not mismatches, subgroups=len(G.all_subgroups()), mismatches=mismatches)


def subhopf_check(F) -> Record:
    G = gr.symmetric(3)
    a, h, _ = hc.group_algebra(G, F)
    k = hc.group_subalgebra_basis(G, _subgroup_of_order(G, 3), F)
    l = hc.group_subalgebra_basis(G, _subgroup_of_order(G, 2), F)
    kl = hc.subhopf_product(h, k, l)
    return check("hopf/subhopf/S3=C3.C2", "product of a subHopf algebra and one it normalises",
                 kl.shape[0] == 6, dim=kl.shape[0])


def dual_identity_check(p: int, F, depth: int) -> Record:
    sys = sy.dual_profinite(p, F, depth)
    bad = []
    for lo, hi in sys.covers:
        if lo == sys.base:
            continue
        A = sys.stage(hi).algebra
        delta_hi = A.basis_vector(0)
        pulled = sys.cover(lo, hi).inclusion(sys.stage(lo).algebra.basis_vector(0))
        if not np.array_equal(ac.multiply(A, delta_hi, pulled), delta_hi):
            bad.append(f"{lo}<{hi}")
    return check(f"hopf/dual-identity/p={p}", "point indicator times pulled-back indicator", not bad, failures=bad)


# ---------------------------------------------------------------------------
# witnesses


def witnesses_suite(sys: sy.DirectedSystem, seed: int, params: dict) -> Iterator[Record]:
    F = sys.field
    first = sys.above(sys.base, strict=True)[0]
    k = sy.trivial_compatible(sys)
    try:
        w = sy.noncoherence_witness(sys, k, first, depth=int(params.get("noncoherence_depth", 2)))
        yield Record("witnesses/noncoherence/trivial", "finite-dimensional simples are not coherent", PASS,
                     {"stage": w.stage, "element": sys.stage(w.stage).algebra.labels[w.element],
                      "vector": _vec(F, w.vector)})
    except sy.NotFoundAtDepth as exc:
        yield Record("witnesses/noncoherence/trivial", "finite-dimensional simples are not coherent", NOT_FOUND,
                     {"reason": str(exc)})
    samples = int(params.get("essentiality_samples", 20))
    rng = rng_for(seed, "witnesses/essentiality")
    whole = sy.whole_system(sys)
    for t in range(samples):
        i = sys.ids[int(rng.integers(0, len(sys.ids)))]
        v = F.random(rng, sys.stage(i).dim)
        if F.is_zero(v):
            v = sys.stage(i).algebra.unit
        z = sy.ColimElement(i, v)
        cid = f"witnesses/essentiality/{t:02d}"
        try:
            w = sy.essentiality_witness(sys, z, whole, depth=int(params.get("essentiality_depth", 3)))
            yield Record(cid, "the induced augmentation ideal is essential", PASS,
                         {"z_stage": i, "stage": w.stage, "vector": _vec(F, w.vector)})
        except sy.NotFoundAtDepth as exc:
            yield Record(cid, "the induced augmentation ideal is essential", NOT_FOUND, {"z_stage": i, "reason": str(exc)})
    a1 = sys.stage(first).algebra
    integral = ac.left_integrals(a1)[0]
    for cid, w, expect in [("witnesses/minimal-ideal/integral", sy.ColimElement(first, integral), True),
                           ("witnesses/minimal-ideal/unit", sy.ColimElement(first, a1.unit), False)]:
        try:
            d = sy.minimal_ideal_descend(sys, w)
            yield check(cid, "minimal ideals descend to a stage", expect, stage=d.stage, dim=d.ideal.dim,
                        induced_simple=d.induced_simple)
        except sy.NotFoundAtDepth as exc:
            yield Record(cid, "minimal ideals descend to a stage", PASS if not expect else NOT_FOUND,
                         {"reason": str(exc)})
    tower = sy.hom_tower(sys, k, k, depth=int(params.get("hom_depth", 2)))
    yield check("witnesses/hom-tower/kk", "Hom of compatible modules is the limit of stage Homs",
                tower.dims[-1] == 1 and all(tower.restriction_inclusions), dims=tower.dims, stable=tower.stable)
    local = sy.is_local_system(sys)
    expected = _expected_local(sys)
    yield check("witnesses/local", "a system of local stages is local",
                expected is None or local == expected, local=local, expected=expected)


def _expected_local(sys: sy.DirectedSystem) -> Optional[bool]:
    """Ground truth from group theory: F G is local iff G is a p-group in characteristic p."""
    p = sys.field.characteristic
    if sys.family == "prufer":
        return p == sys.params["p"]
    if sys.family == "dual_profinite":
        return len(sys.ids) == 1
    if sys.family in ("symmetric_chain", "subgroup_lattice"):
        return all(_is_p_group(sys.stage(i).group.order, p) for i in sys.ids)
    return None


def _is_p_group(n: int, p: int) -> bool:
    if n == 1:
        return True
    if p == 0:
        return False
    while n % p == 0:
        n //= p
    return n == 1


SUITES: dict[str, Callable[[sy.DirectedSystem, int, dict], Iterator[Record]]] = {
    "frobenius": frobenius_suite,
    "extensions": extensions_suite,
    "coherent": coherent_suite,
    "ideals": ideals_suite,
    "hopf": hopf_suite,
    "witnesses": witnesses_suite,
    "homological": homological_suite,
}
SUITE_NAMES = tuple(SUITES) + ("all",)


def run_suite(name: str, sys: sy.DirectedSystem, seed: int = 0, params: Optional[dict] = None) -> list[Record]:
    """Records of one suite (or all), ordered by check id.

    ``params`` maps suite names to their keyword tables.
    """
    params = params or {}
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise KeyError(f"unknown suite {name!r}; known: {list(SUITE_NAMES)}")
    records = []
    for n in names:
        records += list(SUITES[n](sys, seed, dict(params.get(n, {}))))
    ids = [r.id for r in records]
    dup = {i for i in ids if ids.count(i) > 1}
    if dup:
        raise AssertionError(f"duplicate check ids {sorted(dup)}")
    return sorted(records, key=lambda r: r.id)
