import json

import pytest

from locfrob import exactla as la
from locfrob import system as sy
from locfrob.cli import CACHE_ENV, ExprError, compute, main, parse_expr
from locfrob.serialize import system_to_config

P2_TOML = 'family = "prufer"\nfield = "GF(2)"\ndepth = 3\n[params]\np = 2\n'


@pytest.fixture
def p2_cfg(tmp_path):
    path = tmp_path / "p2.toml"
    path.write_text(P2_TOML)
    return str(path)


def _json_cfg(tmp_path, name, cfg):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# -- validate --------------------------------------------------------------


def test_validate_ok(capsys, p2_cfg):
    code, out, _ = _run(capsys, ["validate", p2_cfg])
    assert code == 0
    report = json.loads(out)
    assert report["checks"][0]["status"] == "pass"
    assert report["checks"][0]["data"]["stages"] == {"0": 1, "1": 2, "2": 4, "3": 8}


def test_validate_depth_override(capsys, p2_cfg):
    code, out, _ = _run(capsys, ["validate", p2_cfg, "--depth", "1"])
    assert code == 0
    assert json.loads(out)["checks"][0]["data"]["stages"] == {"0": 1, "1": 2}


def test_validate_corrupted_custom(capsys, tmp_path):
    cfg = system_to_config(sy.prufer(2, la.GF(2), 3))
    m = cfg["custom"]["inclusions"][1]["matrix"]
    m[0][0] = 1 - m[0][0]
    code, out, err = _run(capsys, ["validate", _json_cfg(tmp_path, "bad.json", cfg)])
    assert code == 1
    assert "pair (1, 2)" in err
    assert json.loads(out)["checks"][0]["status"] == "fail"


def test_validate_custom_roundtrip(capsys, tmp_path):
    cfg = system_to_config(sy.dual_profinite(2, la.QQ, 2))
    code, _, _ = _run(capsys, ["validate", _json_cfg(tmp_path, "good.json", cfg)])
    assert code == 0


def test_broken_config(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert _run(capsys, ["validate", str(path)])[0] == 2
    assert _run(capsys, ["validate", str(tmp_path / "missing.toml")])[0] == 2
    bad_family = _json_cfg(tmp_path, "fam.json", {"family": "nothing"})
    code, _, err = _run(capsys, ["validate", bad_family])
    assert code == 2 and "unknown family" in err


def test_toml_and_json_agree(capsys, tmp_path, p2_cfg):
    js = _json_cfg(tmp_path, "p2.json", {"family": "prufer", "field": "GF(2)", "depth": 3, "params": {"p": 2}})
    _, a, _ = _run(capsys, ["compute", p2_cfg, "--expr", "dims()"])
    _, b, _ = _run(capsys, ["compute", js, "--expr", "dims()"])
    assert json.loads(a)["checks"] == json.loads(b)["checks"]


# -- suite --------------------------------------------------------------


def test_suite_frobenius_symmetric(capsys, tmp_path):
    cfg = _json_cfg(tmp_path, "s4.json", {"family": "symmetric_chain", "field": "QQ", "params": {"n_max": 4},
                                          "suites": {"frobenius": {"field_product": False}}})
    code, out, _ = _run(capsys, ["suite", cfg, "--suite", "frobenius"])
    assert code == 0
    checks = {c["id"]: c for c in json.loads(out)["checks"]}
    assert checks["frobenius/stage:4/integrals-dim"]["status"] == "pass"
    assert checks["frobenius/stage:4/maschke"]["data"]["flag"] is True


def test_suite_ideals(capsys, p2_cfg):
    code, out, _ = _run(capsys, ["suite", p2_cfg, "--suite", "ideals", "--seed", "3"])
    report = json.loads(out)
    assert code == 0 and report["seed"] == 3
    assert set(report["summary"]) == {"pass"}


def test_unknown_suite(capsys, p2_cfg):
    code, _, err = _run(capsys, ["suite", p2_cfg, "--suite", "nope"])
    assert code == 2 and "unknown suite" in err


def test_suite_deterministic(capsys, tmp_path, p2_cfg):
    outs = []
    for name in ("a.json", "b.json"):
        target = tmp_path / name
        assert main(["suite", p2_cfg, "--suite", "coherent", "--seed", "7", "--json", str(target)]) == 0
        outs.append(target.read_bytes())
    capsys.readouterr()
    assert outs[0] == outs[1]
    _, stdout, _ = _run(capsys, ["suite", p2_cfg, "--suite", "coherent", "--seed", "7"])
    assert stdout.encode() == outs[0]
    _, other, _ = _run(capsys, ["suite", p2_cfg, "--suite", "coherent", "--seed", "8"])
    assert other.encode() != outs[0]


def test_suite_cache(capsys, tmp_path, p2_cfg, monkeypatch):
    cache = tmp_path / "cache"
    monkeypatch.setenv(CACHE_ENV, str(cache))
    _, first, err1 = _run(capsys, ["suite", p2_cfg, "--suite", "witnesses"])
    assert len(list(cache.iterdir())) == 1 and "cached" not in err1
    _, second, err2 = _run(capsys, ["suite", p2_cfg, "--suite", "witnesses"])
    assert first == second and "cached" in err2
    _run(capsys, ["suite", p2_cfg, "--suite", "witnesses", "--seed", "1"])
    assert len(list(cache.iterdir())) == 2


def test_no_timing_in_report(capsys, p2_cfg):
    _, out, err = _run(capsys, ["suite", p2_cfg, "--suite", "hopf"])
    assert "s\n" in err
    report = json.loads(out)
    assert set(report) == {"suite", "seed", "config", "version", "summary", "checks"}
    assert "seconds" not in out and "elapsed" not in out


# -- compute --------------------------------------------------------------


@pytest.mark.parametrize("expr,key,expected", [
    ("cohdim(trivial@stage1)", "value", "1/2"),
    ("cohdim(A@2)", "value", "1"),
    ("cohrk(k2@1)", "value", "2"),
    ("ext(k@1, k@1, 4)", "value", [1, 1, 1, 1, 1]),
    ("stable_hom(k@1, k@1)", "value", 1),
    ("radical(1)", "dim", 1),
    ("socle(2, right)", "dim", 1),
    ("hom_tower(k, k2)", "dims", [2, 2, 2, 2]),
    ("is_local()", "value", True),
])
def test_compute_values(capsys, p2_cfg, expr, key, expected):
    code, out, _ = _run(capsys, ["compute", p2_cfg, "--expr", expr])
    assert code == 0
    assert json.loads(out)["checks"][0]["data"][key] == expected


def test_compute_integrals(capsys, p2_cfg):
    _, out, _ = _run(capsys, ["compute", p2_cfg, "--expr", "integrals(2)"])
    data = json.loads(out)["checks"][0]["data"]
    assert len(data["left"]) == len(data["right"]) == 1
    assert data["left_vectors"] == [[1, 1, 1, 1]]


@pytest.mark.parametrize("expr", ["nope(1)", "cohdim(k)", "cohdim(k@9)", "cohdim(zz@1)", "ext(k@1,k@2,1)",
                                  "dims(", "sign_of_life", "ext(k@1,k@1,x)"])
def test_compute_errors(capsys, p2_cfg, expr):
    assert _run(capsys, ["compute", p2_cfg, "--expr", expr])[0] == 2


def test_parse_expr():
    assert parse_expr("ext(k@1, k@1, 3)") == ("ext", ["k@1", "k@1", "3"])
    assert parse_expr("dims()") == ("dims", [])
    with pytest.raises(ExprError):
        parse_expr("1+1")


def test_compute_record_sign():
    sys = sy.symmetric_chain(3, la.QQ)
    rec = compute(sys, "stable_hom(sign@3, k@3)")
    assert rec.data["value"] == 0
    with pytest.raises(ExprError):
        compute(sy.prufer(2, la.QQ, 2), "cohdim(sign@1)")


def test_argparse_errors(capsys):
    assert main([]) == 2
    assert main(["--version"]) == 0
