import io
import json

import pytest

from paramaass.cli import cli_run
from paramaass.jacobi import jacobi_eisenstein_index1
from paramaass.serialize import dumps, expansion_to_json, jacobi_to_json, load_any

from conftest import cusp_lift, formal_lift


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli_run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def e4(tmp_path):
    path = tmp_path / "e4.json"
    code, _, _ = run("eisenstein", "--weight", 4, "--level", 1, "--nmax", 3, "--mmax", 3, "--json", path)
    assert code == 0
    return path


def test_eisenstein_output(e4):
    obj = json.loads(e4.read_text())
    assert obj["coeffs"][0] == {"n": 0, "r": 0, "m": 0, "c": "1/1"}
    keys = [(c["m"], c["n"], c["r"]) for c in obj["coeffs"]]
    assert keys == sorted(keys)
    assert all(isinstance(c["c"], str) for c in obj["coeffs"])


def test_stdout_equals_file(e4):
    code, out, _ = run("eisenstein", "--weight", 4, "--level", 1, "--nmax", 3, "--mmax", 3)
    assert code == 0 and out == e4.read_text()


def test_maass_suite_passes(e4):
    code, out, _ = run("check", "--suite", "maass", "--in", e4)
    assert code == 0
    assert json.loads(out)["status"] == "pass"


def test_hecke_eigenvalue(tmp_path):
    path = tmp_path / "e.json"
    run("eisenstein", "--weight", 4, "--level", 1, "--nmax", 8, "--mmax", 8, "--json", path)
    code, out, _ = run("hecke", "--op", "tnq", "--q", 2, "--in", path, "--eigen")
    assert code == 0
    assert json.loads(out) == {"status": "eigen", "eigenvalue": "45/2"}


def test_hecke_not_eigen_exits_one(tmp_path):
    f = formal_lift(5, 4, 1, 8)
    path = tmp_path / "f.json"
    path.write_text(dumps(expansion_to_json(f)))
    code, out, _ = run("hecke", "--op", "tnq", "--q", 2, "--in", path, "--eigen")
    assert code == 1
    assert json.loads(out)["status"] == "not-eigen"


def test_hecke_apply_emits_expansion(e4):
    code, out, _ = run("hecke", "--op", "tnq", "--q", 2, "--in", e4)
    assert code == 0
    assert load_any(out).level == 1


def test_hecke_box_too_small(tmp_path):
    path = tmp_path / "tiny.json"
    path.write_text(dumps({"weight": 4, "level": 1, "nmax": 0, "mmax": 0, "coeffs": []}))
    code, _, err = run("hecke", "--op", "tnq", "--q", 2, "--in", path, "--eigen")
    assert code == 2 and err


def test_roundtrip_byte_identical(tmp_path):
    for obj in (expansion_to_json(cusp_lift(2, 4)), jacobi_to_json(jacobi_eisenstein_index1(4, 5))):
        text = dumps(obj)
        parsed = load_any(text)
        again = dumps(expansion_to_json(parsed) if "level" in obj else jacobi_to_json(parsed))
        assert again == text


def test_slice_and_lift_roundtrip(tmp_path):
    f = cusp_lift(1, 5)
    fpath = tmp_path / "f.json"
    fpath.write_text(dumps(expansion_to_json(f)))
    code, out, _ = run("slice", "--m", 1, "--in", fpath)
    assert code == 0
    jpath = tmp_path / "phi.json"
    jpath.write_text(out)
    code, out, _ = run("lift", "--weight", 10, "--level", 1, "--jacobi", jpath, "--nmax", 2, "--mmax", 2)
    assert code == 0
    g = load_any(out)
    assert all(g[key] == f[key] for key in g.keys())


def test_lift_rejects_invalid_jacobi(tmp_path):
    phi = jacobi_to_json(jacobi_eisenstein_index1(4, 3))
    phi["coeffs"][1]["c"] = "7/1"
    path = tmp_path / "bad.json"
    path.write_text(dumps(phi))
    code, _, err = run("lift", "--weight", 4, "--level", 1, "--jacobi", path, "--nmax", 1, "--mmax", 1)
    assert code == 2 and "validation" in err


def test_reps_dump(tmp_path):
    code, out, _ = run("reps", "--op", "tnq", "--q", 2, "--level", 3)
    obj = json.loads(out)
    assert code == 0
    assert obj["operator"]["count"] == 15
    assert obj["sanity"]["status"] == "pass"


def _golden(tmp_path):
    good = cusp_lift(2, 14)
    bad = good.with_coefficient((1, 1, 2), good[1, 1, 2] + 1)
    paths = {}
    for name, f in (("good", good), ("bad", bad)):
        paths[name] = tmp_path / f"{name}.json"
        paths[name].write_text(dumps(expansion_to_json(f)))
    return paths


@pytest.mark.parametrize("suite,extra", [
    ("maass", []),
    ("lemma1", ["--p", 3]),
    ("lemma1", ["--p", 3, "--mode", "iii"]),
    ("fricke", []),
    ("corollary2", []),
])
def test_golden_pass_fail(tmp_path, suite, extra):
    paths = _golden(tmp_path)
    code, out, _ = run("check", "--suite", suite, "--in", paths["good"], *extra)
    assert code == 0, out
    code, out, _ = run("check", "--suite", suite, "--in", paths["bad"], *extra)
    assert code == 1
    report = json.loads(out)
    assert report["status"] == "fail" and report["witnesses"]


def test_corollary_suites(tmp_path):
    lift = tmp_path / "lift.json"
    lift.write_text(dumps(expansion_to_json(cusp_lift(1, 12))))
    assert run("check", "--suite", "corollary3", "--in", lift, "--p", 2)[0] == 0
    assert run("check", "--suite", "cusp", "--in", lift)[0] == 0
    phi = tmp_path / "e.json"
    phi.write_text(dumps(jacobi_to_json(jacobi_eisenstein_index1(4, 20))))
    assert run("check", "--suite", "corollary5", "--in", phi, "--p", 2)[0] == 0


def test_corollary6_suite(tmp_path):
    from paramaass.eisenstein import jacobi_eisenstein
    phi = jacobi_eisenstein(4, 2, 2)
    good = tmp_path / "good.json"
    good.write_text(dumps(jacobi_to_json(phi)))
    assert run("check", "--suite", "corollary6", "--in", good)[0] == 0
    bad = tmp_path / "bad.json"
    bad.write_text(dumps(jacobi_to_json(phi.scale(2))))
    assert run("check", "--suite", "corollary6", "--in", bad)[0] == 1


@pytest.mark.parametrize("argv", [
    ["check", "--suite", "nope", "--in", "x"],
    ["bogus"],
    ["eisenstein", "--weight", 5, "--level", 1, "--nmax", 1, "--mmax", 1],
    ["eisenstein", "--weight", 4, "--level", 4, "--nmax", 1, "--mmax", 1],
    ["check", "--suite", "maass", "--in", "/nonexistent/file.json"],
    ["reps", "--op", "jdiag", "--q", 2, "--level", 2],
])
def test_invalid_input_exit_two(argv):
    code, out, err = run(*argv)
    assert code == 2 and err and not out


def test_missing_p_is_input_error(e4):
    code, _, err = run("check", "--suite", "lemma1", "--in", e4)
    assert code == 2 and "--p" in err


def test_malformed_json(tmp_path):
    path = tmp_path / "x.json"
    for text in ("{", "[]", '{"weight": 4, "level": 1, "nmax": 1, "mmax": 1, "coeffs": [{"n": 5, "r": 0, "m": 0, "c": "1"}]}'):
        path.write_text(text)
        assert run("check", "--suite", "maass", "--in", path)[0] == 2
