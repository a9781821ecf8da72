import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from steenalg import steenrod as S
from steenalg.cli import main

FIXTURE = Path(__file__).resolve().parents[1] / "src" / "steenalg" / "data" / "gl11.json"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


@pytest.mark.parametrize(
    "argv,expected",
    [
        (("mul", "Sq2", "Sq2", "--p", "2"), "Sq3 Sq1"),
        (("mul", "1", "Sq5", "--p", "2"), "Sq5"),
        (("mul", "P1", "P1 P1", "--p", "3"), "0"),
        (("mul", "Sq1", "Sq2"), "Sq3"),
        (("reduce", "Sq2 Sq2 Sq2"), "Sq5 Sq1"),
        (("reduce", "P1 P1", "--p", "3", "--strategy", "right"), "2*P2"),
        (("dim", "--p", "2", "--deg", "0"), "1"),
        (("dim", "--p", "3", "--deg", "5", "--verify"), "2 (core) == 2 (oracle)"),
        (("dim", "--p", "2", "--deg", "20", "--oracle"), str(S.dim(2, 20))),
        (("milnor", "coassoc", "--p", "2", "--K", "6"), "PASS"),
        (("milnor", "coproduct", "b2", "--p", "2"), "b2⊗1 + b1⊗b1^2 + 1⊗b2"),
        (("dpow-mul", "u1^(1)", "u1^(2)", "--p", "5"), "3*u1^(3)"),
        (("dpow-bracket", "u1^(1) d1", "u1^(2) d1", "--N", "2", "--p", "2"), "u1^(2) d1"),
    ],
)
def test_examples(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == expected


def test_basis_table(capsys):
    code, out, _ = run(capsys, "basis", "--p", "2", "--deg", "8")
    assert code == 0
    assert out.splitlines() == ["Sq8", "Sq7 Sq1", "Sq6 Sq2", "Sq5 Sq2 Sq1"]


def test_obstruct_text(capsys):
    code, out, _ = run(capsys, "obstruct", "--p", "2", "--mode", "nonrestricted")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "NO_REALISATION"
    assert any(line.split()[:3] == ["dim", "g_k", "1"] for line in lines)
    row = next(line for line in lines if line.startswith("dim g_k"))
    assert row.split()[2:10] == ["1", "1", "1", "0", "0", "1", "1", "0"]


@pytest.mark.parametrize("p,mode", [(3, "restricted"), (3, "nonrestricted"), (2, "restricted")])
def test_obstruct_json(capsys, p, mode):
    code, out, _ = run(capsys, "obstruct", "--p", str(p), "--mode", mode, "--kmax", "52" if p == 3 else "16", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "NO_REALISATION"
    assert "profile" in data and data["certificates"]
    code2, out2, _ = run(capsys, "obstruct", "--p", str(p), "--mode", mode, "--kmax", "52" if p == 3 else "16", "--json")
    assert out == out2


def test_liecheck(capsys, tmp_path):
    code, out, _ = run(capsys, "liecheck", str(FIXTURE))
    assert code == 0 and out.splitlines()[-1] == "PASS"
    code, out, _ = run(capsys, "liecheck", "gl11.json")  # bundled fixture by name
    assert code == 0
    data = json.loads(FIXTURE.read_text())
    data["bracket"] = [b for b in data["bracket"] if (b["i"], b["j"]) != ("E11", "E12")]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run(capsys, "liecheck", str(bad), "--json")
    assert code == 1
    report = json.loads(out)
    assert report["pass"] is False
    assert any(r["witness"] for r in report["results"] if not r["passed"])
    bad.write_text("{not json")
    assert run(capsys, "liecheck", str(bad))[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ("mul", "Sq2", "Sq("),
        ("mul", "P1", "P1", "--p", "2"),
        ("dim", "--p", "4", "--deg", "2"),
        ("dim", "--p", "2", "--deg", "30", "--oracle"),
        ("milnor", "coproduct", "b7", "--K", "3"),
        ("milnor", "coproduct", "--K", "3"),
        ("dpow-mul", "u3^(1)", "1", "--N", "2"),
        ("obstruct", "--mode", "other"),
        ("nonsense",),
        ("liecheck", "/no/such/file.json"),
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2


def test_env_degree_cap(capsys, monkeypatch):
    monkeypatch.setenv("STEENROD_MAX_DEG", "4")
    assert run(capsys, "dim", "--p", "2", "--deg", "5", "--oracle")[0] == 2
    assert run(capsys, "dim", "--p", "2", "--deg", "4", "--oracle")[1] == "2"


def test_json_byte_stable_and_roundtrip(capsys):
    code, out, _ = run(capsys, "mul", "P1", "P3", "--p", "3", "--json")
    assert out == run(capsys, "mul", "P1", "P3", "--p", "3", "--json")[1]
    el = S.SteenrodElement.from_json(json.loads(out))
    text = run(capsys, "mul", "P1", "P3", "--p", "3")[1]
    assert S.parse_expr(text, 3) == el == S.P(1, p=3) * S.P(3, p=3)
    code, out, _ = run(capsys, "milnor", "coproduct", "b1^2 b2", "--p", "3", "--K", "2", "--json")
    assert json.loads(out) == json.loads(run(capsys, "milnor", "coproduct", "b1^2 b2", "--p", "3", "--K", "2", "--json")[1])


def test_verify_seeded(capsys):
    code, out, _ = run(capsys, "dim", "--p", "3", "--deg", "12", "--verify", "--seed", "3")
    assert code == 0 and out == "1 (core) == 1 (oracle)"


def test_console_script():
    exe = shutil.which("steenalg")
    cmd = [exe] if exe else [sys.executable, "-m", "steenalg.cli"]
    res = subprocess.run(cmd + ["mul", "Sq2", "Sq2"], capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.strip() == "Sq3 Sq1"
