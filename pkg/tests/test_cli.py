import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from pfh_lattice.cli import main

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectral_with_oracle(capsys):
    code, out, _ = run(["spectral", "--profile", str(CORPUS / "quad.json"), "--d", "2", "--k", "-2", "--oracle"], capsys)
    data = json.loads(out)
    assert code == 0 and data["agree"] and data["value"] == data["oracle"]["value"] == "1/2"


def test_reports_are_byte_identical(capsys):
    argv = ["spectral", "--profile", str(CORPUS / "cubic.json"), "--d", "3", "--k", "-1"]
    a = run(argv, capsys)[1]
    b = run(argv, capsys)[1]
    assert a == b


def test_quasiflat(capsys):
    code, out, _ = run(["quasiflat", "--iota", "3", "--n", "2", "--pairs", "50", "--seed", "5"], capsys)
    data = json.loads(out)
    assert code == 0 and data["lower_triangular"] and data["positive_diagonal"] and data["seed"] == 5
    assert data["matrix_A"][0][1] == "0"


def test_coarse_and_growth(capsys, tmp_path):
    code, out, _ = run(["coarse", "--r", "1", "--i", "1", "--j", "2"], capsys)
    assert code == 0 and json.loads(out)["ok"]
    target = tmp_path / "g.csv"
    code, _, _ = run(["growth", "--dmax", "64", "--format", "csv", "--out", str(target)], capsys)
    lines = target.read_text().splitlines()
    assert code == 0 and lines[0].startswith("d,d_exact") and lines[1].startswith("4,4,16,16,75,75")


def test_invariants_csv(capsys):
    code, out, _ = run(["invariants", "--profile", str(CORPUS / "quad.json"), "--d-list", "1,2,3", "--no-eta", "--format", "csv"], capsys)
    assert code == 0
    assert "0.555555555556,5/9" in out


def test_oracle_check_shipped_corpus(capsys):
    code, out, _ = run(["oracle-check", str(CORPUS), "--dmax", "3"], capsys)
    data = json.loads(out)
    assert code == 0 and data["ok"]
    assert {p["profile"] for p in data["profiles"]} == {"quad.json", "cubic.json", "family_f1.json"}


def test_oracle_check_corrupted_fixture(capsys, tmp_path):
    shutil.copy(Path(__file__).parent / "fixtures" / "corrupted.path.json", tmp_path)
    code, _, _ = run(["oracle-check", str(tmp_path)], capsys)
    assert code == 2


def test_oracle_check_empty_corpus(capsys, tmp_path):
    assert run(["oracle-check", str(tmp_path)], capsys)[0] == 64


def test_empty_profile_is_invalid(capsys, tmp_path):
    f = tmp_path / "empty.json"
    f.write_text("")
    assert run(["spectral", "--profile", str(f), "--d", "1", "--k", "-1"], capsys)[0] == 1


def test_invalid_inputs(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"pieces": [{"from": "-1", "to": "1", "coeffs": ["0", "0", "-1"]}]}))
    assert run(["spectral", "--profile", str(bad), "--d", "1", "--k", "-1"], capsys)[0] == 1
    assert run(["spectral", "--profile", str(CORPUS / "quad.json"), "--d", "2", "--k", "1"], capsys)[0] == 1
    assert run(["spectral", "--profile", str(tmp_path / "missing.json"), "--d", "1", "--k", "1"], capsys)[0] == 1


def test_bad_usage(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["spectral", "--d", "1"])
    assert exc.value.code == 64
    assert main([]) == 64
    capsys.readouterr()


def test_console_entry_point():
    exe = shutil.which("pfh-lattice")
    cmd = [exe] if exe else [sys.executable, "-m", "pfh_lattice"]
    res = subprocess.run(cmd + ["coarse", "--r", "2"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["margin"] == "22/43"
