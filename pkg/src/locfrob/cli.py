"""Command line: ``validate``, ``suite`` and ``compute`` over a system config.

Exit codes: 0 when every check passes, 1 when some check fails, 2 for
unreadable configs, unknown suites and unknown operations or fixtures.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import time
from pathlib import Path
from typing import Callable, Optional

from . import __version__
from . import algcore as ac
from . import repmod as rm
from . import system as sy
from .serialize import ConfigError, dumps, load_config, matrix, system_from_config
from .suites import FAIL, PASS, SUITE_NAMES, Record, check, jsonable, run_suite

CACHE_ENV = "LOCFROB_CACHE_DIR"


class ExprError(ValueError):
    pass


# ---------------------------------------------------------------------------
# reports


def build_report(kind: str, cfg: dict, seed: Optional[int], records: list[Record]) -> dict:
    records = sorted(records, key=lambda r: r.id)
    counts: dict[str, int] = {}
    for r in records:
        counts[r.status] = counts.get(r.status, 0) + 1
    return {"suite": kind, "seed": seed, "config": jsonable(cfg), "version": __version__,
            "summary": counts, "checks": [r.to_json() for r in records]}


def emit(report: dict, out: Optional[str]) -> None:
    text = dumps(report)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def exit_code(report: dict) -> int:
    return 1 if any(c["status"] == FAIL for c in report["checks"]) else 0


def _cache_path(cfg: dict, suite: str, seed: int, depth: Optional[int]) -> Optional[Path]:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    key = dumps({"config": jsonable(cfg), "suite": suite, "seed": seed, "depth": depth, "version": __version__})
    return Path(root) / f"{hashlib.sha256(key.encode()).hexdigest()}.json"


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# compute expressions

_CALL = re.compile(r"^\s*([A-Za-z_]\w*)\s*\((.*)\)\s*$")


def parse_expr(expr: str) -> tuple[str, list[str]]:
    """``op(arg, arg, ...)`` with flat, comma-separated arguments."""
    m = _CALL.match(expr)
    if not m:
        raise ExprError(f"cannot parse expression {expr!r}; expected op(args)")
    body = m.group(2).strip()
    return m.group(1), [a.strip() for a in body.split(",")] if body else []


def _stage_id(system: sy.DirectedSystem, ref: str) -> str:
    ref = ref.strip()
    for cand in (ref, ref[len("stage"):].strip() if ref.startswith("stage") else None):
        if cand is not None and cand in system.ids:
            return cand
    raise ExprError(f"unknown stage {ref!r}; stages: {list(system.ids)}")


def stage_module(system: sy.DirectedSystem, name: str, stage: str) -> rm.FDModule:
    """Named fixture modules at a stage: k/trivial, A/regular, k2, sign, free<n>."""
    a = system.stage(stage).algebra
    if name in ("k", "trivial"):
        return rm.trivial_module(a)
    if name in ("A", "regular"):
        return rm.regular_module(a)
    if name == "k2":
        return rm.direct_sum([rm.trivial_module(a)] * 2)
    if name == "sign":
        if system.family not in ("symmetric_chain", "subgroup_lattice"):
            raise ExprError("sign needs permutation-group stages")
        return sy.sign_compatible(system).at(stage)
    m = re.fullmatch(r"free(\d+)", name)
    if m:
        return rm.free_module(a, int(m.group(1)))
    raise ExprError(f"unknown fixture {name!r}; known: k, trivial, A, regular, k2, sign, free<n>")


def compatible_fixture(system: sy.DirectedSystem, name: str) -> sy.CompatibleFDModule:
    if name in ("k", "trivial"):
        return sy.trivial_compatible(system)
    if name == "k2":
        k = sy.trivial_compatible(system)
        return sy.compatible_direct_sum([k, k])
    if name == "sign":
        if system.family not in ("symmetric_chain", "subgroup_lattice"):
            raise ExprError("sign needs permutation-group stages")
        return sy.sign_compatible(system)
    raise ExprError(f"unknown compatible fixture {name!r}; known: k, trivial, k2, sign")


def _module_ref(system: sy.DirectedSystem, ref: str) -> tuple[str, rm.FDModule]:
    if "@" not in ref:
        raise ExprError(f"module reference {ref!r} needs the form name@stage")
    name, stage = ref.split("@", 1)
    sid = _stage_id(system, stage)
    return sid, stage_module(system, name.strip(), sid)


def _int(arg: str) -> int:
    try:
        return int(arg)
    except ValueError:
        raise ExprError(f"expected an integer, got {arg!r}") from None


def _arity(args: list[str], lo: int, hi: Optional[int] = None) -> None:
    hi = lo if hi is None else hi
    if not lo <= len(args) <= hi:
        raise ExprError(f"expected {lo}..{hi} arguments, got {len(args)}")


def _op_cohdim(system, args):
    _arity(args, 1)
    sid, m = _module_ref(system, args[0])
    return {"value": sy.coherent_dim(system, sy.CoherentModule(sid, m))}


def _op_cohrk(system, args):
    _arity(args, 1)
    sid, m = _module_ref(system, args[0])
    r = sy.coherent_rank(system, sy.CoherentModule(sid, m))
    return {"value": r.value, "exact": r.exact, "method": r.method}


def _two_modules(system, args):
    s1, m = _module_ref(system, args[0])
    s2, n = _module_ref(system, args[1])
    if s1 != s2:
        raise ExprError("both modules must live at the same stage")
    return m, n


def _op_ext(system, args):
    _arity(args, 3)
    m, n = _two_modules(system, args)
    return {"value": rm.ext(m, n, _int(args[2]))}


def _op_stable_hom(system, args):
    _arity(args, 2)
    m, n = _two_modules(system, args)
    return {"value": rm.stable_hom(m, n).dim}


def _op_integrals(system, args):
    _arity(args, 1)
    a = system.stage(_stage_id(system, args[0])).algebra
    F = a.field
    return {"left": [a.format_element(v) for v in ac.left_integrals(a)],
            "right": [a.format_element(v) for v in ac.right_integrals(a)],
            "left_vectors": matrix(F, ac.left_integrals(a))}


def _op_radical(system, args):
    _arity(args, 1)
    a = system.stage(_stage_id(system, args[0])).algebra
    rad = a.radical.basis
    return {"dim": rad.shape[0], "basis": [a.format_element(v) for v in rad]}


def _op_socle(system, args):
    _arity(args, 1, 2)
    a = system.stage(_stage_id(system, args[0])).algebra
    side = {"left": ac.Side.LEFT, "right": ac.Side.RIGHT}.get(args[1].lower() if len(args) > 1 else "left")
    if side is None:
        raise ExprError("side must be left or right")
    soc = ac.socle(a, side).basis
    return {"dim": soc.shape[0], "basis": [a.format_element(v) for v in soc]}


def _op_dims(system, args):
    _arity(args, 0)
    return {"value": system.dims()}


def _op_hom_tower(system, args):
    _arity(args, 2, 3)
    m, n = compatible_fixture(system, args[0]), compatible_fixture(system, args[1])
    t = sy.hom_tower(system, m, n, _int(args[2]) if len(args) == 3 else None)
    return {"stages": list(t.stages), "dims": list(t.dims), "stable": t.stable}


def _op_is_local(system, args):
    _arity(args, 0)
    return {"value": sy.is_local_system(system)}


OPS: dict[str, Callable] = {
    "cohdim": _op_cohdim,
    "cohrk": _op_cohrk,
    "ext": _op_ext,
    "stable_hom": _op_stable_hom,
    "integrals": _op_integrals,
    "radical": _op_radical,
    "socle": _op_socle,
    "dims": _op_dims,
    "hom_tower": _op_hom_tower,
    "is_local": _op_is_local,
}


def compute(system: sy.DirectedSystem, expr: str) -> Record:
    op, args = parse_expr(expr)
    if op not in OPS:
        raise ExprError(f"unknown operation {op!r}; known: {sorted(OPS)}")
    return Record(f"compute/{op}", f"value of {op}", PASS, {"expr": expr, **OPS[op](system, args)})


# ---------------------------------------------------------------------------
# commands


def _load(path: str, depth: Optional[int]) -> tuple[dict, sy.DirectedSystem]:
    cfg = load_config(path)
    return cfg, system_from_config(cfg, depth)


def cmd_validate(args) -> int:
    cfg, system = _load(args.config, args.depth)
    rep = sy.validate_system(system)
    records = [check("validate/system", "axioms of a directed system of free Frobenius extensions", rep.ok,
                     failures=rep.failures, **rep.data)]
    for msg in rep.failures:
        _log(f"FAIL {msg}")
    report = build_report("validate", cfg, None, records)
    emit(report, args.json)
    return exit_code(report)


def cmd_suite(args) -> int:
    if args.suite not in SUITE_NAMES:
        raise ExprError(f"unknown suite {args.suite!r}; known: {list(SUITE_NAMES)}")
    cfg = load_config(args.config)
    cache = _cache_path(cfg, args.suite, args.seed, args.depth)
    if cache is not None and cache.exists():
        text = cache.read_text(encoding="utf-8")
        if args.json:
            Path(args.json).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        _log(f"suite {args.suite}: cached report {cache.name}")
        return exit_code(json.loads(text))
    system = system_from_config(cfg, args.depth)
    start = time.perf_counter()
    records = run_suite(args.suite, system, args.seed, cfg.get("suites", {}))
    report = build_report(args.suite, cfg, args.seed, records)
    for c in report["checks"]:
        if c["status"] != PASS:
            _log(f"{c['status'].upper()} {c['id']}: {c['anchor']}")
    _log(f"suite {args.suite}: {report['summary']} in {time.perf_counter() - start:.2f}s")
    emit(report, args.json)
    if cache is not None:
        cache.parent.mkdir(parents=True, exist_ok=True)
        cache.write_text(dumps(report), encoding="utf-8")
    return exit_code(report)


def cmd_compute(args) -> int:
    cfg, system = _load(args.config, args.depth)
    report = build_report("compute", cfg, None, [compute(system, args.expr)])
    emit(report, args.json)
    return exit_code(report)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="locfrob", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate the directed system of a config")
    p.add_argument("config")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--json", default=None, help="write the report here instead of stdout")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("suite", help="run a verification suite")
    p.add_argument("config")
    p.add_argument("--suite", required=True, help=f"one of {', '.join(SUITE_NAMES)}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--json", default=None)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("compute", help="evaluate one operation, e.g. 'cohdim(k@1)'")
    p.add_argument("config")
    p.add_argument("--expr", required=True)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--json", default=None)
    p.set_defaults(func=cmd_compute)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, ExprError) as exc:
        _log(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
