import csv
import io
import json
import subprocess
import sys

import pytest

from bellkit import cli

from conftest import DATA, GOLDEN


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_demo_matches_golden(capsys):
    code, out, _ = run(["demo"], capsys)
    assert code == 0
    assert out == (GOLDEN / "demo.txt").read_text()
    assert "bell_original: lhs=1.000000000 rhs=0.750000000 VIOLATED" in out
    assert "quantum_analogue: lhs=1.000000000 rhs=1.250000000 holds" in out


def spins(*names):
    return [DATA / f"spin_{n}.json" for n in names]


def test_check_bell_violated(capsys):
    code, out, _ = run(["check", DATA / "rho0.json", *spins("a", "b", "c"), "-i", "bell-original"], capsys)
    assert code == 2
    doc = json.loads(out)
    assert doc["schema"] == "bellkit/1" and doc["violated"] is True


def test_check_quantum_analogue_holds(capsys):
    code, out, _ = run(["check", DATA / "rho0_rep_sym.json", *spins("a", "b", "c"), "-i", "quantum-analogue"], capsys)
    assert code == 0
    assert json.loads(out)["rhs"] == pytest.approx(1.25)


def test_check_bad_trace(capsys):
    code, _, err = run(["check", DATA / "bad_trace.json", *spins("a", "b", "c"), "-i", "bell-original"], capsys)
    assert code == 1
    assert "TraceNotOne" in err


@pytest.mark.parametrize(
    "inequality, files, extra",
    [
        ("chsh", ("a", "b", "c", "d"), []),
        ("extended-chsh", ("a", "b", "c", "d"), ["--gamma", "1", "2", "3", "-6"]),
        ("separable-bound", ("a", "b", "c"), []),
        ("separable-bound-inf", ("a", "b", "c"), []),
        ("two-term", ("a", "b", "c"), ["--gamma", "1", "-0.5"]),
    ],
)
def test_check_other_inequalities_hold(inequality, files, extra, capsys):
    state = DATA / ("rho0_rep.json" if len(files) == 3 else "rho0.json")
    code, out, _ = run(["check", state, *spins(*files), "-i", inequality, *extra], capsys)
    assert code == 0, out


def test_check_wrong_povm_count(capsys):
    code, _, err = run(["check", DATA / "rho0.json", *spins("a", "b"), "-i", "chsh"], capsys)
    assert code == 1 and "needs 4" in err


def test_check_csv(capsys):
    code, out, _ = run(["check", DATA / "rho0.json", *spins("a", "b", "c"), "-i", "bell-original", "--format", "csv"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["name", "lhs", "rhs", "slack", "violated"]
    assert rows[1] == ["bell_original", "1.000000000", "0.750000000", "-0.250000000", "true"]
    assert "\r" not in out


def test_sweep_bell(capsys):
    code, out, err = run(["sweep", DATA / "sweep_bell.json"], capsys)
    assert code == 2
    doc = json.loads(out)
    assert -doc["best_report"]["slack"] >= 0.25
    assert "best settings" in err


def test_sweep_chsh(capsys):
    code, out, _ = run(["sweep", DATA / "sweep_chsh.json", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert float(rows[0]["lhs"]) == pytest.approx(2.0, abs=1e-9)


def test_sweep_output_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["sweep", DATA / "sweep_bell.json", "--out", a], capsys)
    run(["sweep", DATA / "sweep_bell.json", "--out", b, "--threads", "3"], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_sweep_bad_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"schema": "bellkit/1", "kind": "sweep", "target": "nope"}))
    code, _, err = run(["sweep", cfg], capsys)
    assert code == 1 and "$.target" in err


def test_classical_model(capsys):
    code, out, _ = run(["classical", DATA / "anticorrelated_model.json"], capsys)
    assert code == 0
    assert json.loads(out)["reports"]["classical_bell"]["min_slack"] == 0.0


def test_classical_bad_model(capsys):
    code, _, err = run(["classical", DATA / "bad_model.json"], capsys)
    assert code == 1 and "InvalidDistribution" in err


def test_classical_random(capsys):
    code, out, _ = run(["classical", "--random", "42", "50"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["models"] == 50
    assert all(v["violations"] == 0 for v in doc["reports"].values())


def test_conditions(capsys):
    code, out, _ = run(["conditions", DATA / "rho0_rep_sym.json", *spins("b", "c")], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["vbi"]["sign"] == "MinusSign" and doc["sor"] == "MinusSign"


def test_schema(capsys):
    code, out, _ = run(["schema", "povm"], capsys)
    assert code == 0 and "povm" in json.loads(out)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bellkit.cli", "demo"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "demo.txt").read_text()
