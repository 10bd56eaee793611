import json
import subprocess
import sys

import pytest

from cycnorm.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, json.loads(out) if out else None, json.loads(err) if err else None


def test_is_norm_three_minus_one(capsys):
    code, out, _ = call(capsys, "is-norm", "--ell", "2", "--x", "3", "--y", "-1")
    assert code == 1 and out["is_norm"] is False and out["obstructions"] == ["2", "3"]
    assert out["schema"] == 1


def test_symbol_two_seven(capsys):
    code, out, _ = call(capsys, "symbol", "--ell", "3", "--a", "2", "--b", "7")
    assert code == 0
    assert {"place": "7,0", "value_exp": 1} in out["symbols"]
    code, out, _ = call(capsys, "symbol", "--a", "2", "--b", "7", "--place", "7,0")
    assert out == {"schema": 1, "command": "symbol", "ell": 3, "place": "7,0", "value_exp": 1}


def test_is_norm_cube(capsys):
    code, out, _ = call(capsys, "is-norm", "--ell", "3", "--x", "8", "--y", "7")
    assert code == 0 and out["is_norm"] is True


def test_solve(capsys):
    code, out, _ = call(capsys, "is-norm", "--ell", "2", "--x", "7", "--y", "2", "--solve")
    assert out["solution"] == ["3", "1"]


def test_errors(capsys):
    code, out, err = call(capsys, "symbol", "--a", "(1", "--b", "2")
    assert code == 2 and out is None and err["error"] == "ParseError"
    code, _, err = call(capsys, "frobnicate")
    assert code == 2 and "message" in err
    code, _, err = call(capsys, "power-residue", "--a", "2", "--place", "7")
    assert code == 2 and "splits" in err["message"]
    code, _, err = call(capsys, "nonpower-witness", "--x", "8")
    assert code == 2 and err["error"] == "PreconditionError"


def test_member_and_classify(capsys):
    code, out, _ = call(capsys, "member", "--set", "T", "--a", "2", "--b", "7", "--x", "1/7")
    assert code == 1 and out["member"] is False
    code, out, _ = call(capsys, "classify", "--x", "7*13")
    assert out["unclassifiable"] == ["7,0", "7,1"]
    code, out, _ = call(capsys, "member", "--set", "Phi", "--ij=-1,-1", "--x", "5")
    assert code in (0, 1) and "member" in out


def test_certificate_round_trip(capsys, tmp_path):
    code, params, _ = call(capsys, "fixab", "--seed", "1")
    pfile = tmp_path / "params.json"
    pfile.write_text(json.dumps({k: v for k, v in params.items() if k not in ("schema", "command")}))
    code, built, _ = call(capsys, "certificate", "build", "--x", "2", "--y", "7", "--params", str(pfile))
    assert code == 0 and built["certificate"]["variant"] == "nonsplit"
    cfile = tmp_path / "cert.json"
    cfile.write_text(json.dumps(built))
    code, out, _ = call(capsys, "certificate", "verify", "--cert", str(cfile))
    assert code == 0 and out["valid"] is True
    code, out, _ = call(capsys, "certificate", "verify", "--cert", str(cfile), "--x", "8")
    assert code == 1 and out["valid"] is False


def test_norm_form_and_algebra(capsys):
    code, out, _ = call(capsys, "norm-form", "--y", "2")
    assert out["coeffs"] == ["1", "0", "0", "0", "-6", "0", "2", "0", "0", "4"]
    code, out, _ = call(capsys, "norm-form", "--y", "7", "--represents", "2")
    assert code == 1 and out["represents"] is False
    code, out, _ = call(capsys, "algebra", "nrd", "--a", "2", "--b", "7", "--elem", "1,0,0,0,0,0,0,0,0")
    assert out["nrd"] == "1" and out["trd"] == "3"


def test_deterministic_output():
    cmd = [sys.executable, "-m", "cycnorm", "certificate", "build", "--x", "2", "--y", "7", "--seed", "1"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and b"seconds" not in first


@pytest.mark.parametrize("argv", [["delta", "--a", "2", "--b", "7"], ["fixab", "--ell", "2"],
                                  ["power-residue", "--a", "2", "--place", "7,0"]])
def test_pretty_is_same_json(capsys, argv):
    run(argv)
    compact = capsys.readouterr().out
    run(argv + ["--pretty"])
    pretty = capsys.readouterr().out
    assert json.loads(compact) == json.loads(pretty) and "\n  " in pretty


def test_selftest_quick(capsys):
    code, out, _ = call(capsys, "selftest", "--quick", "--only", "3,8")
    assert code == 0 and out["ok"] and [c["criterion"] for c in out["criteria"]] == [3, 8]
