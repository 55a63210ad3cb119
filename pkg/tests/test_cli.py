from __future__ import annotations

import csv
import io
import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from noncompact.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_measure_examples(capsys):
    assert run(capsys, "measure", "tail(center=[], r=1, start=1)", "--kind", "alpha", "--p", "2")[:2] == (
        0,
        "exact=1.41421356\n",
    )
    assert run(capsys, "measure", "finite([[1,0]])", "--kind", "chi")[1] == "exact=0\n"
    code, out, _ = run(capsys, "measure", "tail(center=[], r=1, start=1)", "--kind", "alpha", "--oracle", "k=3", "--trunc", "8")
    assert code == 0
    assert "exact=1.41421356" in out and "oracle=1.41421356" in out and "difference=0" in out


def test_measure_errors(capsys):
    code, _, err = run(capsys, "measure", "tail(center=[0.5], r=1", "--kind", "alpha")
    assert code == 2 and "position 4" in err
    code, _, err = run(capsys, "measure", "tail(r=1)", "--kind", "alpha", "--oracle", "k=3")
    assert code == 2 and "exceed the budget" in err
    code, _, _ = run(capsys, "measure", "tail(r=1)", "--kind", "beta", "--oracle", "k=3", "--trunc", "8")
    assert code == 2


def test_hull_dist(capsys):
    code, out, _ = run(capsys, "hull-dist", "finite([[1, 0], [0, 1]])")
    assert code == 0 and "distance=0.707106781" in out and "gap=0" in out
    code, out, _ = run(capsys, "hull-dist", "sphere(center=[0.8], r=0.6, start=2)", "--trunc", "16", "--scheme", "positive")
    assert "distance=0.81394103" in out


def test_modulus_csv(capsys):
    code, out, _ = run(capsys, "modulus", "--kind", "beta", "--p", "2", "--grid", "0:1.3:0.1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 14
    row = next(r for r in rows if r["epsilon"] == "1.0")
    assert float(row["analytic"]) == pytest.approx(0.292893, abs=1e-6)
    # bit-stable across runs
    assert run(capsys, "modulus", "--kind", "beta", "--p", "2", "--grid", "0:1.3:0.1", "--format", "csv")[1] == out


def test_modulus_prime_gap(capsys):
    code, out, _ = run(capsys, "modulus", "--kind", "alpha", "--prime", "--grid", "1:1:0.1", "--format", "json")
    pt = json.loads(out)["grid"][0]
    assert pt["numeric"] == pytest.approx(0.2929, abs=5e-3)
    assert pt["analytic"] == pytest.approx(0.1340, abs=1e-4)


def test_modulus_single_point_and_gaps(capsys):
    code, out, _ = run(capsys, "modulus", "--grid", "0:0:0.1")
    assert code == 0 and len(out.splitlines()) == 2 and out.splitlines()[1].startswith("0.0,0.0,0.0,")
    code, out, err = run(capsys, "modulus", "--kind", "chi", "--grid", "0.9:1.1:0.1")
    assert code == 0 and "warning: eps=1.0" in err and out.splitlines()[2] == "1.0,,,"


def test_modulus_svg(tmp_path, capsys):
    target = tmp_path / "beta.svg"
    code, _, _ = run(capsys, "modulus", "--kind", "beta", "--grid", "0:1.3:0.1", "--format", "svg", "--output", str(target))
    root = ET.fromstring(target.read_text())
    ns = "{http://www.w3.org/2000/svg}"
    assert code == 0 and len(root.findall(f"{ns}polyline")) == 2
    labels = [t.text for t in root.findall(f"{ns}text")]
    assert "closed form (beta)" in labels and "witness estimate (beta)" in labels


def test_characteristic(capsys):
    assert run(capsys, "characteristic", "--kind", "beta", "--analytic")[1] == "characteristic=0\n"
    code, out, _ = run(capsys, "characteristic", "--kind", "alpha", "--prime", "--grid", "0:1:0.25", "--format", "json")
    assert json.loads(out) == {"value": 0.0, "kind": "alpha", "restricted_minimal": True}


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# demo\np=3\ngrid=0:1:0.5\nformat=csv\n")
    _, out, _ = run(capsys, "modulus", "--kind", "beta", "--analytic", "--config", str(cfg))
    assert len(out.splitlines()) == 4
    assert float(out.splitlines()[3].split(",")[1]) == pytest.approx(1 - 0.5 ** (1 / 3))
    _, out, _ = run(capsys, "modulus", "--kind", "beta", "--analytic", "--config", str(cfg), "--p", "2")
    assert float(out.splitlines()[3].split(",")[1]) == pytest.approx(1 - 0.5**0.5)
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour=blue\n")
    assert run(capsys, "modulus", "--config", str(bad))[0] == 2


def test_verify_commands(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "chain", "--p", "3", "--format", "text", "--no-timing")
    assert code == 0 and out.startswith("[PASS] chain")
    code, _, err = run(capsys, "verify", "--suite", "bogus")
    assert code == 2 and "usage" in err


def test_verify_all_json(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "all", "--p", "2", "--trials", "50", "--no-timing")
    report = json.loads(out)
    assert code == 0 and len(report["checks"]) >= 7
    assert all(c["passed"] for c in report["checks"])


def test_verify_failure_exit_code(capsys):
    # a grid that never reaches eps >= 0.8 cannot exhibit the alpha/beta split
    code, _, _ = run(capsys, "verify", "--suite", "nonminimalizability", "--grid", "0:0.5:0.1")
    assert code == 1


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "noncompact.cli", "measure", "tail(r=1)", "--kind", "chi"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "exact=1\n"
    proc = subprocess.run([sys.executable, "-m", "noncompact.cli"], capture_output=True, text=True)
    assert proc.returncode == 2


def test_numeric_failure_exit_code(monkeypatch, capsys):
    from noncompact import cli
    from noncompact.errors import NumericError

    def stalled(*a, **k):
        raise NumericError("hull distance did not converge", 0.5, 0.6)

    monkeypatch.setattr(cli, "hull_distance", stalled)
    code, _, err = run(capsys, "hull-dist", "finite([[1, 0], [0, 1]])")
    assert code == 3 and "bracket" in err
