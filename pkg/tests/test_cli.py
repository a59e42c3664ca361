import json
import subprocess
import sys

import pytest

from lkvr.cli import main
from lkvr.proofs import format_proof, nsv_transitivity_proof


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sat_unsat(capsys):
    code, out, _ = run(capsys, "sat", "~Kv1(F, d)")
    assert (code, out) == (1, "UNSAT\n")
    code, out, _ = run(capsys, "sat", "p | q")
    assert (code, out) == (0, "SAT\n")


def test_sat_model_and_check(capsys, tmp_path):
    path = tmp_path / "m.json"
    code, out, _ = run(capsys, "sat", "~Kv1(T, d)", "--model", str(path))
    assert (code, out) == (0, "SAT\n")
    data = json.loads(path.read_text())
    root = data["root"]
    kids = [v for u, v in data["relations"]["1"] if u == root]
    assert sorted(data["values"][w]["d"] for w in kids) == ["bullet", "circ"]
    code, out, _ = run(capsys, "check", str(path), root, "~Kv1(T, d)")
    assert (code, out) == (0, "true\n")
    code, out, _ = run(capsys, "check", str(path), root, "Kv1(T, d)")
    assert (code, out) == (1, "false\n")


def test_trace_goes_to_stderr(capsys):
    code, out, err = run(capsys, "sat", "<1>p & [1]q", "--trace")
    assert code == 0 and out == "SAT\n"
    lines = err.splitlines()
    assert lines and all(l.count("\t") == 3 for l in lines)


def test_prove(capsys, tmp_path):
    good = tmp_path / "good.proof"
    good.write_text("# transitivity\n\n" + format_proof(nsv_transitivity_proof()))
    assert run(capsys, "prove", str(good))[:2] == (0, "verified\n")
    bad = tmp_path / "bad.proof"
    bad.write_text("1. p -> p ; TAUT\n2. p ; TAUT\n")
    code, out, _ = run(capsys, "prove", str(bad))
    assert code == 1 and out.startswith("line 2:")


def test_oracle(capsys, tmp_path):
    path = tmp_path / "o.json"
    code, out, _ = run(capsys, "oracle", "~Kv1(T, d)", "--max-worlds", "3",
                       "--max-values", "2", "--model", str(path))
    assert (code, out) == (0, "FOUND\n") and path.exists()
    code, out, _ = run(capsys, "oracle", "p & ~p", "--max-worlds", "2", "--max-values", "1")
    assert (code, out) == (1, "EXHAUSTED\n")


def test_fuzz(capsys):
    code, out, _ = run(capsys, "fuzz", "--seed", "7", "--count", "100", "--size", "6")
    assert (code, out) == (0, "100/100 ok\n")
    assert run(capsys, "fuzz", "--seed", "7", "--count", "100", "--size", "6")[1] == out


@pytest.mark.parametrize("argv", [
    ["sat", "p &"],
    ["sat", "[0]p"],
    ["check", "/nonexistent.json", "w0", "p"],
    ["prove", "/nonexistent.proof"],
    ["oracle", "p", "--max-worlds", "0", "--max-values", "1"],
    ["oracle", "p"],
    ["fuzz", "--count", "x"],
    ["frobnicate"],
    [],
])
def test_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as e:
        sys.exit(main(argv))
    assert e.value.code == 2


def test_check_errors(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text('{"worlds": ["a"], "root": "a"}')
    assert run(capsys, "check", str(path), "b", "p")[0] == 2
    path.write_text("{not json")
    assert run(capsys, "check", str(path), "a", "p")[0] == 2
    bad = tmp_path / "bad.proof"
    bad.write_text("1 p ; TAUT\n")
    assert run(capsys, "prove", str(bad))[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "lkvr", "sat", "~Kv1(F, d)"],
                         capture_output=True, text=True)
    assert res.returncode == 1 and res.stdout == "UNSAT\n"
