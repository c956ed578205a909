import json

import pytest

from matroid_forge.cli import main
from matroid_forge.config import ENV_VAR


def write(tmp_path, doc, name="inst.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def uniform_instance(n, r, cap):
    return {
        "elements": list(range(n)),
        "M": {"type": "uniform", "rank": r},
        "N": {"parts": [{"elements": list(range(n)), "cap": cap}] if n else []},
    }


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_intersect_u32_against_u31(tmp_path, capsys):
    code, out, _ = run(capsys, "intersect", "--input", write(tmp_path, uniform_instance(3, 2, 1)))
    doc = json.loads(out)
    assert code == 0
    assert doc["size"] == doc["edmonds_size"] == 1
    assert doc["agreement"] and doc["verified"]
    assert doc["witness"] == {"I": [0], "I_M": [], "I_N": [0]}
    cert = doc["certificate"]
    assert cert["rank_M_A"] + cert["rank_N_complement"] == 1


def test_intersect_trivial_instance(tmp_path, capsys):
    code, out, _ = run(capsys, "intersect", "--input", write(tmp_path, uniform_instance(0, 0, 0)))
    doc = json.loads(out)
    assert code == 0 and doc["witness"] == {"I": [], "I_M": [], "I_N": []}


def test_intersect_trace(tmp_path, capsys):
    code, out, _ = run(capsys, "intersect", "--trace", "--input", write(tmp_path, uniform_instance(3, 1, 1)))
    assert code == 0 and json.loads(out)["trace"][0]["step"] == "contract"


def test_edmonds_with_brute_force(tmp_path, capsys):
    code, out, _ = run(capsys, "edmonds", "--brute", "--trace", "--input", write(tmp_path, uniform_instance(4, 2, 3)))
    doc = json.loads(out)
    assert code == 0 and doc["certified"] and doc["brute_force"]["size"] == 2
    assert [len(t["I"]) for t in doc["trace"]] == [1, 2]


def test_adversarial_witness_exits_2(tmp_path, capsys):
    inst = uniform_instance(3, 2, 1)
    inst["witness"] = {"I": [0, 1], "I_M": [0, 1], "I_N": []}
    code, out, _ = run(capsys, "verify", "--input", write(tmp_path, inst))
    doc = json.loads(out)
    assert code == 2 and not doc["ok"] and doc["source"] == "instance"


def test_verify_witness_file(tmp_path, capsys):
    path = write(tmp_path, uniform_instance(3, 2, 1))
    wpath = write(tmp_path, {"witness": {"I": [2], "I_M": [], "I_N": [2]}}, "w.json")
    code, out, _ = run(capsys, "verify", "--input", path, "--witness", wpath)
    assert code == 0 and json.loads(out)["source"] == "file"


def test_verify_computes_a_witness_when_none_is_given(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--input", write(tmp_path, uniform_instance(4, 2, 1)))
    assert code == 0 and json.loads(out)["source"] == "computed"


def test_malformed_witness_is_an_input_error(tmp_path, capsys):
    inst = uniform_instance(3, 2, 1)
    inst["witness"] = {"I": [-1], "I_M": [], "I_N": []}
    code, _, err = run(capsys, "verify", "--input", write(tmp_path, inst))
    assert code == 1 and "$.witness" in err


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as info:
        main(["intersect", "--format", "yaml"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 1


def test_missing_input_exits_1(capsys):
    code, _, err = run(capsys, "intersect")
    assert code == 1 and "--input" in err


def test_check_axioms_capacity_exits_3(tmp_path, capsys):
    code, _, err = run(capsys, "check-axioms", "--input", write(tmp_path, uniform_instance(9, 2, 1)))
    assert code == 3 and "9" in err


def test_check_axioms_reports_violations(tmp_path, capsys):
    inst = {
        "elements": [0, 1],
        "M": {"type": "explicit", "independent_sets": [[], [0], [0, 1]]},
        "N": {"parts": [{"elements": [0, 1], "cap": 1}]},
    }
    code, out, _ = run(capsys, "check-axioms", "--input", write(tmp_path, inst))
    doc = json.loads(out)
    assert code == 2 and not doc["M"]["ok"] and doc["N"]["ok"]


def test_brute_threshold_override_exits_3(tmp_path, capsys):
    path = write(tmp_path, uniform_instance(6, 2, 1))
    code, _, _ = run(capsys, "edmonds", "--brute", "--threshold-brute", "5", "--input", path)
    assert code == 3


def test_environment_override(tmp_path, capsys, monkeypatch):
    path = write(tmp_path, uniform_instance(6, 2, 1))
    monkeypatch.setenv(ENV_VAR, "brute=5")
    assert run(capsys, "edmonds", "--brute", "--input", path)[0] == 3
    assert run(capsys, "edmonds", "--brute", "--threshold-brute", "6", "--input", path)[0] == 0
    monkeypatch.setenv(ENV_VAR, "nonsense")
    code, _, err = run(capsys, "edmonds", "--input", path)
    assert code == 1 and ENV_VAR in err


def test_classify_uniform(tmp_path, capsys):
    code, out, _ = run(capsys, "classify-uniform", "--input", write(tmp_path, uniform_instance(5, 2, 5)))
    doc = json.loads(out)
    assert code == 0 and doc["M"] == {"kind": "uniform", "rank": 2} and doc["N"]["kind"] == "free"


def test_gen_is_deterministic_and_parseable(tmp_path, capsys):
    args = ["gen", "--family", "linear_gf2", "--elements", "7", "--seed", "11"]
    first = run(capsys, *args)[1]
    assert first == run(capsys, *args)[1]
    path = write(tmp_path, json.loads(first))
    assert run(capsys, "intersect", "--input", path)[0] == 0


def test_gen_writes_files(tmp_path, capsys):
    target = tmp_path / "g.json"
    code, out, _ = run(capsys, "gen", "--output", str(target))
    assert code == 0 and json.loads(out)["output"] == str(target)
    assert json.loads(target.read_text())["M"]["type"] == "graphic"


def test_gen_bounds_violation_exits_1(capsys):
    assert run(capsys, "gen", "--elements", "30")[0] == 1


def test_text_format(tmp_path, capsys):
    code, out, _ = run(capsys, "intersect", "--format", "text", "--input", write(tmp_path, uniform_instance(3, 2, 1)))
    assert code == 0
    lines = out.splitlines()
    assert "agreement: true" in lines and "size: 1" in lines
    assert "witness:" in lines and "  I: 0" in lines and "  I_M: -" in lines


def test_quick_selftest_passes(capsys):
    code, out, _ = run(capsys, "selftest", "--quick")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["mode"] == "quick"
    assert [c["number"] for c in doc["criteria"]] == list(range(1, 8))
