"""JSON forms of algebras, modules, morphisms and Hopf data; system config loading."""

from __future__ import annotations

import json
import sys as _sys
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from . import exactla as la
from .algcore import Algebra
from .frobext import AlgebraMorphism
from .hopfcore import HopfData
from .repmod import FDModule

if _sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class ConfigError(ValueError):
    pass


def scalar(F: la.Field, x) -> Any:
    """ℚ scalars as "p/q" strings (plain "p" when integral), GF(p) scalars as ints."""
    return F.format(x)


def matrix(F: la.Field, m: np.ndarray) -> Any:
    """Nested lists in row-major order."""
    if m.ndim == 0:
        return scalar(F, m[()])
    return [matrix(F, row) for row in m] if m.ndim > 1 else [scalar(F, x) for x in m]


def parse_matrix(F: la.Field, data) -> np.ndarray:
    def conv(x):
        return [conv(y) for y in x] if isinstance(x, list) else F.parse(x)

    return F.array(conv(data))


def algebra_to_json(a: Algebra) -> dict:
    F = a.field
    return {
        "field": F.name,
        "name": a.name,
        "labels": list(a.labels),
        "structure_constants": matrix(F, a.c),
        "unit": matrix(F, a.unit),
        "augmentation": matrix(F, a.aug),
    }


def algebra_from_json(data: Mapping, F: la.Field | None = None) -> Algebra:
    try:
        F = F or la.field_from_name(str(data["field"]))
        return Algebra.build(F, parse_matrix(F, data["structure_constants"]), parse_matrix(F, data["unit"]),
                             parse_matrix(F, data["augmentation"]), data.get("labels"), data.get("name", ""))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed algebra: {exc}") from None


def module_to_json(m: FDModule, algebra_ref: str = "") -> dict:
    return {"algebra_ref": algebra_ref or m.algebra.name, "dim": m.dim, "action": matrix(m.field, m.action)}


def module_from_json(data: Mapping, a: Algebra) -> FDModule:
    F = a.field
    n = int(data["dim"])
    act = parse_matrix(F, data["action"]) if n else F.zeros(a.dim, 0, 0)
    return FDModule(a, act.reshape(a.dim, n, n))


def morphism_to_json(f: AlgebraMorphism, source_ref: str, target_ref: str) -> dict:
    return {"source": source_ref, "target": target_ref, "matrix": matrix(f.field, f.matrix)}


def hopf_to_json(h: HopfData, algebra_ref: str = "") -> dict:
    F = h.field
    return {"algebra_ref": algebra_ref or h.base.name, "coproduct": matrix(F, h.coproduct_matrix()),
            "antipode": matrix(F, h.antipode)}


def hopf_from_json(data: Mapping, a: Algebra) -> HopfData:
    F = a.field
    d = a.dim
    return HopfData(a, parse_matrix(F, data["coproduct"]).reshape(d, d, d), parse_matrix(F, data["antipode"]))


# ---------------------------------------------------------------------------
# configs


def load_config(path: str | Path) -> dict:
    """Read a TOML or JSON config; the suffix decides, with a JSON-then-TOML fallback."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        if path.suffix == ".toml":
            return tomllib.loads(text)
        if path.suffix == ".json":
            return json.loads(text)
        try:
            return json.loads(text)
        except json.JSONDecodeError:
            return tomllib.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None


def system_from_config(cfg: Mapping, depth: int | None = None):
    """``{family, params, field, depth}`` or ``{custom: {field, stages, inclusions}}``."""
    from .system import FAMILIES, builtin_system, custom_system

    if not isinstance(cfg, Mapping):
        raise ConfigError("config must be a table/object")
    if "custom" in cfg:
        return _custom_from_config(cfg["custom"], custom_system)
    try:
        family = cfg["family"]
        F = la.field_from_name(str(cfg.get("field", "QQ")))
    except KeyError:
        raise ConfigError("config needs 'family' (or 'custom')") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if family not in FAMILIES:
        raise ConfigError(f"unknown family {family!r}; known: {list(FAMILIES)}")
    d = int(depth if depth is not None else cfg.get("depth", 3))
    if d < 0:
        raise ConfigError("depth must be nonnegative")
    return builtin_system(family, cfg.get("params", {}), F, d)


def _custom_from_config(data: Mapping, custom_system):
    try:
        F = la.field_from_name(str(data["field"]))
        stages = []
        for st in data["stages"]:
            a = algebra_from_json(st["algebra"], F)
            stages.append((str(st["id"]), a, parse_matrix(F, st["form"])))
        incs = [(str(i["source"]), str(i["target"]), parse_matrix(F, i["matrix"])) for i in data["inclusions"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed custom system: {exc}") from None
    try:
        return custom_system(F, stages, incs, name=str(data.get("name", "custom")))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def system_to_config(sys) -> dict:
    """An explicit ``custom`` config reproducing every stage and covering inclusion."""
    F = sys.field
    stages = []
    for i in sys.ids:
        st = sys.stage(i)
        stages.append({"id": i, "algebra": algebra_to_json(st.algebra), "form": matrix(F, st.frobenius.form)})
    incs = [{"source": lo, "target": hi, "matrix": matrix(F, sys.cover(lo, hi).inclusion.matrix)}
            for lo, hi in sys.covers]
    return {"custom": {"name": sys.name, "field": F.name, "stages": stages, "inclusions": incs}}


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"
