from __future__ import annotations

import json
import subprocess
import sys

import pytest

from schwarzode.cli import main

from conftest import PROBLEMS

GOLDEN = ["hurwitz", "hurwitz_rescaled", "class3", "class4_1", "class4_2"]


@pytest.mark.parametrize("name", GOLDEN)
@pytest.mark.parametrize("command", ["construct", "analyze", "verify"])
def test_golden_files_exit_zero(command, name, capsys):
    assert main([command, str(PROBLEMS / f"{name}.toml")]) == 0
    assert capsys.readouterr().out


def test_construct_json_then_analyze(tmp_path, capsys):
    out = tmp_path / "eq.json"
    assert main(["construct", str(PROBLEMS / "hurwitz.toml"), "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["format"] == "schwarzode-equation/1" and data["order"] == 3
    assert data["metadata"]["group_order"] == 168
    capsys.readouterr()
    assert main(["analyze", str(out), "--json", "-"]) == 0
    captured = capsys.readouterr()
    report = json.loads(captured.out)
    assert report["genus"] == "3" and report["degree"] == "4"  # exact rationals as strings
    assert "Euler characteristic" in captured.err


def test_analyze_printed_convention(capsys):
    assert main(["analyze", str(PROBLEMS / "hurwitz.toml"), "--euler-convention", "printed"]) == 0
    assert "Euler characteristic (printed)" in capsys.readouterr().out


def test_verify_json(capsys):
    assert main(["verify", str(PROBLEMS / "class3.toml"), "--json", "-", "--tolerance", "1e-8"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["passed"] and rep["residual"] < 1e-8


def test_preset(capsys):
    assert main(["preset", "klein168", "--json", "-"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["degrees"] == [4, 6, 14, 21]
    assert info["order"] == 168
    assert [s["terms"] for s in info["syzygies"]] == [10]


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text('group = "klein168"\nf4 = "0"\nf6 = "z +"\nf14 = "1"\n')
    assert main(["construct", str(bad)]) == 2
    assert "line 3" in capsys.readouterr().err

    assert main(["construct", str(tmp_path / "missing.toml")]) == 2

    degenerate = tmp_path / "degenerate.toml"
    degenerate.write_text('group = "klein168"\nf4 = "0"\nf6 = "0"\nf14 = "0"\n')
    assert main(["construct", str(degenerate)]) == 3

    assert main(["analyze", str(PROBLEMS / "extra" / "kato_pencil.toml")]) == 4

    tight = tmp_path / "tight.toml"
    tight.write_text((PROBLEMS / "hurwitz.toml").read_text() + "tolerance = 1e-30\n")
    assert main(["verify", str(tight)]) == 5


def test_parametric_verify_needs_values(tmp_path):
    text = (PROBLEMS / "extra" / "kato_pencil.toml").read_text()
    f = tmp_path / "p.toml"
    f.write_text("\n".join(l for l in text.splitlines() if not l.startswith("param_values")))
    assert main(["verify", str(f)]) == 2
    assert main(["verify", str(PROBLEMS / "extra" / "kato_pencil.toml")]) == 0


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "schwarzode.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "schwarzode" in proc.stdout
