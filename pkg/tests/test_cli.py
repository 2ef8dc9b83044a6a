import json

import numpy as np
import pytest

from slicecalc.cli import main
from slicecalc.fixtures import load_fixture, random_paravector_operator
from slicecalc.io import operator_to_json, write_json
from slicecalc.operators import CliffordOperator


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / "small.ini"
    path.write_text("[fuzz]\nlemma_cases = 4\ncases = 2\n[truncation]\nmain_K = 5 10\n")
    return str(path)


def _points(out):
    return sorted((p["u"], p["v"]) for p in json.loads((out / "points.json").read_text())["points"])


@pytest.mark.parametrize("name", ["real_diagonal", "paravector_constant", "block"])
def test_spectrum_fixtures(tmp_path, name):
    assert main(["spectrum", f"fixture:{name}", "--out", str(tmp_path)]) == 0
    _, expected = load_fixture(name)
    got = _points(tmp_path)
    assert len(got) == len(expected)
    for (u, v), (eu, ev) in zip(got, sorted(expected)):
        assert abs(u - eu) <= 1e-4 and abs(v - ev) <= 1e-4
    header = (tmp_path / "heatmap.csv").read_text().splitlines()[0]
    assert header.startswith("u,v")


def test_spectrum_from_file(tmp_path):
    T = CliffordOperator.from_components(2, [np.diag([0.5, 3.0])])
    write_json(tmp_path / "T.json", operator_to_json(T))
    assert main(["spectrum", str(tmp_path / "T.json"), "--out", str(tmp_path / "o")]) == 0
    assert [round(u, 6) for u, _ in _points(tmp_path / "o")] == [0.5, 3.0]


def test_verify_lemmas_passes(tmp_path, small_config):
    assert main(["verify", "lemmas4", "--config", small_config, "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "verify-lemmas4.json").read_text())
    assert report["summary"]["failed"] == 0 and report["summary"]["total"] > 0
    assert {"check", "inputs-digest", "residual", "threshold", "pass"} <= set(report["checks"][0])


def test_verify_is_deterministic(tmp_path, small_config):
    for run in ("a", "b"):
        assert main(["verify", "derivatives", "--config", small_config, "--out", str(tmp_path / run)]) == 0
    a, b = ((tmp_path / r / "verify-derivatives.json").read_bytes() for r in ("a", "b"))
    assert a == b
    assert main(["verify", "derivatives", "--config", small_config, "--seed", "5",
                 "--out", str(tmp_path / "c")]) == 0
    assert (tmp_path / "c" / "verify-derivatives.json").read_bytes() != a


def test_verify_taylor_noncommuting_fails(tmp_path, small_config):
    rng = np.random.default_rng(3)
    write_json(tmp_path / "T.json", operator_to_json(random_paravector_operator(rng, 2, 3)))
    write_json(tmp_path / "N.json", operator_to_json(random_paravector_operator(rng, 2, 3, 0.05)))
    argv = ["verify", "taylor", "--T", str(tmp_path / "T.json"), "--config", small_config, "--out", str(tmp_path)]
    assert main(argv + ["--N", str(tmp_path / "N.json")]) == 3
    report = json.loads((tmp_path / "verify-taylor.json").read_text())
    assert any("commut" in c.get("message", "") for c in report["checks"])
    assert main(argv) == 0  # N defaults to 0.05 T


def test_eval_cube(tmp_path):
    T, _ = load_fixture("random_T")
    f = json.dumps({"kind": "series", "coeffs": [0, 0, 0, 1]})
    assert main(["eval", "--f", f, "--T", "fixture:random_T", "--out", str(tmp_path)]) == 0
    result = json.loads((tmp_path / "eval.json").read_text())["result"]
    assert np.max(np.abs(np.array(result["entries"]) - (T @ T @ T).entries)) <= 1e-12


def test_eval_constant_right(tmp_path):
    f = tmp_path / "f.json"
    f.write_text(json.dumps({"kind": "series", "side": "right", "coeffs": [1]}))
    assert main(["eval", "--f", str(f), "--T", "fixture:block", "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "eval.json").read_text())
    assert data["side"] == "right"
    assert np.allclose(np.array(data["result"]["entries"]), CliffordOperator.identity(2, 2).entries, atol=1e-12)


def test_eval_taylor(tmp_path):
    T, _ = load_fixture("random_T")
    write_json(tmp_path / "N.json", operator_to_json(T * 0.05))
    f = '{"kind": "intrinsic", "name": "exp"}'
    assert main(["eval", "--f", f, "--T", "fixture:random_T", "--taylor", str(tmp_path / "N.json"),
                 "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "eval.json").read_text())
    assert data["residual"] <= 1e-8 and len(data["term_norms"]) == 21


@pytest.mark.parametrize("argv", [
    ["spectrum", "missing.json"],
    ["spectrum", "fixture:nope"],
    ["eval", "--f", "{bad", "--T", "fixture:block"],
    ["eval", "--f", '{"kind": "what"}', "--T", "fixture:block"],
    ["verify", "lemmas4", "--config", "missing.ini"],
])
def test_input_errors_exit_2(tmp_path, argv):
    assert main(argv + ["--out", str(tmp_path)]) == 2


def test_bad_json_file_exit_2(tmp_path):
    (tmp_path / "T.json").write_text('{"n": 2, "entries": [[[1, 2]]]}')
    assert main(["spectrum", str(tmp_path / "T.json"), "--out", str(tmp_path)]) == 2


def test_config_prints_defaults(capsys):
    assert main(["config"]) == 0
    assert "[tolerances]" in capsys.readouterr().out
