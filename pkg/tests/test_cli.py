import json
from pathlib import Path

import numpy as np
import pytest

from mixconc import fixtures
from mixconc.cli import main
from mixconc.errors import ValidationError
from mixconc.io import dumps_report, load_spec, parse_grid, spec_from_dict, spec_to_dict
from mixconc.process import HmmSpec, JointDist, MarkovSpec, build_hmm_joint, build_markov_joint

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
F1 = str(FIXTURES / "f1.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_fixture_files_load():
    f1 = load_spec(F1)
    assert isinstance(f1, MarkovSpec)
    np.testing.assert_array_equal(build_markov_joint(f1).mass, build_markov_joint(fixtures.f1()).mass)
    f4 = load_spec(FIXTURES / "f4.json")
    assert isinstance(f4, HmmSpec)
    np.testing.assert_allclose(build_hmm_joint(f4)[1].mass, build_hmm_joint(fixtures.f4())[1].mass)
    assert isinstance(load_spec(FIXTURES / "product.json"), JointDist)
    assert load_spec(FIXTURES / "f1_n100.json").n == 100
    t6 = load_spec(FIXTURES / "trunc6.json")
    np.testing.assert_array_equal(t6.kernel(1), fixtures.trunc6().kernel(1))


@pytest.mark.parametrize("spec", [fixtures.f1(), fixtures.f4(), build_markov_joint(fixtures.f1())])
def test_spec_round_trip(spec):
    doc = spec_to_dict(spec)
    again = spec_from_dict(json.loads(json.dumps(doc)))
    assert spec_to_dict(again) == doc


def test_spec_validation():
    with pytest.raises(ValidationError):
        spec_from_dict({"type": "markov"})
    with pytest.raises(ValidationError):
        spec_from_dict({"type": "graph"})
    bad = spec_to_dict(fixtures.f1())
    bad["p0"] = [0.5, 0.6]
    with pytest.raises(ValidationError):
        spec_from_dict(bad)


def test_parse_grid():
    np.testing.assert_allclose(parse_grid("0:0.1:0.3"), [0, 0.1, 0.2, 0.3])
    assert parse_grid("0:0.1:0.3")[-1] == 0.3
    assert parse_grid("0:0.5:20").size == 41
    assert parse_grid("1,2.5").tolist() == [1.0, 2.5]
    assert parse_grid("0:0.3:1").tolist()[-1] == pytest.approx(0.9)
    for bad in ("0:0:1", "1:1:0", "a:b:c", "0:1", "2,1", "-1,0", "nan"):
        with pytest.raises(ValidationError):
            parse_grid(bad)


def test_dumps_report_is_canonical():
    text = dumps_report({"b": np.float64(0.1), "a": np.arange(2), "flag": np.bool_(True)})
    doc = json.loads(text)
    assert doc == {"schema": "mixconc/1", "a": [0, 1], "b": 0.1, "flag": True}
    assert list(doc) == sorted(doc) and text.endswith("\n")
    with pytest.raises(ValidationError):
        dumps_report({"x": float("nan")})


def test_mixing_command(capsys):
    code, out, _ = run(capsys, "mixing", "--spec", F1)
    doc = json.loads(out)
    assert code == 0 and doc["inf_norm"] == 1.75 and doc["schema"] == "mixconc/1"


def test_certify_command(capsys, tmp_path):
    tsv = tmp_path / "t.tsv"
    code, out, _ = run(capsys, "certify", "--spec", F1, "--c", "1", "--t", "0:1:2", "--tsv", str(tsv))
    doc = json.loads(out)
    assert code == 0 and doc["bound"][0] == 2.0 and doc["effective"][0] == 1.0
    assert doc["bound"][1] == pytest.approx(1.894065187087531, rel=1e-15)
    assert tsv.read_text().splitlines()[0].startswith("t\t")
    code, out, _ = run(capsys, "certify", "--spec", F1, "--c", "1", "--t", "1", "--constant", "mn")
    assert json.loads(out)["constant_kind"] == "mn"


def test_output_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["simulate", "--spec", F1, "--count", "3000", "--seed", "5", "--t", "0:0.5:3"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b), "--workers", "3"]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_other_commands(capsys):
    code, out, _ = run(capsys, "contraction", "--spec", str(FIXTURES / "f4.json"))
    assert code == 0 and json.loads(out)["chain"] == "hidden" and json.loads(out)["m_n"] == 1.75
    code, out, _ = run(capsys, "bar", "--spec", F1, "--z", "a")
    assert code == 0 and json.loads(out)["bar"] == ["10", "10", "10"]
    code, out, _ = run(capsys, "psi", "--spec", F1, "--i", "1", "--prefix", "a")
    assert json.loads(out)["psi"] == 0.875
    code, out, _ = run(capsys, "phi-oracle", "--spec", F1, "--i", "1", "--prefix", "a", "--method", "lp")
    assert json.loads(out)["value"] == pytest.approx(0.875, abs=1e-9)
    code, out, _ = run(capsys, "simulate", "--spec", F1, "--count", "2000", "--t", "0,1,2", "--exact",
                       "--mean-mode", "exact")
    doc = json.loads(out)
    assert code == 0 and doc["comparison"]["passed"]


def test_error_exit_codes(capsys):
    code, out, err = run(capsys, "mixing", "--spec", str(FIXTURES / "missing.json"))
    assert code == 1 and out == "" and json.loads(err)["error"]["type"] == "ValidationError"
    code, _, err = run(capsys, "mixing", "--spec", F1, "--budget", "4")
    assert code == 2 and json.loads(err)["error"]["type"] == "CapacityError"
    code, _, err = run(capsys, "certify", "--spec", F1, "--c", "1", "--t", "1:0:2")
    assert code == 1
    code, _, err = run(capsys, "psi", "--spec", F1, "--i", "1", "--prefix", "q")
    assert code == 1
    code, _, _ = run(capsys, "nonsense")
    assert code == 1


def test_verify_acceptance_suite(capsys):
    code, out, err = run(capsys, "verify", "--suite", "acceptance")
    assert code == 0 and json.loads(out)["passed"]
    assert len([l for l in err.splitlines() if l.startswith(("PASS", "FAIL"))]) == 11
