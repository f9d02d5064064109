import subprocess
import sys

import pytest

from qse.harness import cli
from qse.partition import Partition

from conftest import FIG1


@pytest.fixture
def fig1_file(tmp_path):
    path = tmp_path / "fig1.qse"
    path.write_text(FIG1)
    return str(path)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_pass(capsys, fig1_file):
    code, out, _ = run(capsys, "verify", fig1_file)
    assert code == 0 and out.strip() == "PASS"


def test_verify_fail(capsys, fig1_file, monkeypatch):
    def wrong(tree):
        return Partition.from_values(("x", "y"), (3, 2),
                                     {"A": [], "B": [], "C": [], "D": [(0, 0)]})
    monkeypatch.setattr(cli, "brute_force_partition", wrong)
    code, out, _ = run(capsys, "verify", fig1_file)
    assert code == 1 and out.startswith("FAIL")


def test_sample_csv(capsys, fig1_file):
    code, out, _ = run(capsys, "sample", fig1_file, "--shots", "8192", "--seed", "7")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "bitstring,count"
    assert len(lines) == 33
    assert sum(int(l.split(",")[1]) for l in lines[1:]) == 8192


def test_compile(capsys, fig1_file):
    code, out, _ = run(capsys, "compile", fig1_file)
    assert code == 0
    assert out.startswith("# qubits 19\n")
    assert out.endswith("# dictionary\nA 1001\nB 0*01\nC 10*0\nD 0**0\n")


def test_run_text_and_json(capsys, fig1_file):
    code, out, err = run(capsys, "run", fig1_file, "--timing")
    assert code == 0
    assert "A 1001 4: (x=1, y=0) (x=2, y=0) (x=2, y=1) (x=3, y=0)" in out
    assert "partition check: PASS" in out
    assert "simulate" in err
    code, out, _ = run(capsys, "run", fig1_file, "--json")
    assert code == 0 and '"space_size": 32' in out


def test_widths_override(capsys, fig1_file):
    code, out, _ = run(capsys, "run", fig1_file, "--widths", "x=2")
    assert code == 0 and "space 16" in out
    code, _, err = run(capsys, "run", fig1_file, "--widths", "q=2")
    assert code == 2 and "undeclared" in err
    code, _, err = run(capsys, "run", fig1_file, "--widths", "x")
    assert code == 2


def test_sweep(capsys, fig1_file):
    code, out, _ = run(capsys, "sweep", fig1_file, "--max-width", "3")
    assert code == 0
    assert out.splitlines()[1] == "1,0.5000,quantum"
    assert out.splitlines()[-1] == "minimal full-coverage width: 2"


def test_bench(capsys):
    code, out, _ = run(capsys, "bench")
    assert code == 0
    assert "dart             4         3       4/3  yes" in out


def test_missing_file(capsys):
    code, out, err = run(capsys, "run", "nosuchfile.qse")
    assert code == 2 and out == "" and "nosuchfile.qse" in err


def test_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.qse"
    bad.write_text("var a:1; if (a <) {L} else {R}")
    code, _, err = run(capsys, "verify", str(bad))
    assert code == 2 and "line 1" in err


def test_usage_errors(capsys, fig1_file):
    assert run(capsys)[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "sweep", fig1_file)[0] == 2
    assert run(capsys, "sample", fig1_file, "--shots", "0")[0] == 2


def test_too_many_qubits(capsys, tmp_path):
    big = tmp_path / "big.qse"
    big.write_text("var a:8; var b:8; if (a * b == 6) {T} else {E}")
    code, _, err = run(capsys, "run", str(big))
    assert code == 2 and "ceiling" in err


def test_module_entry_point(fig1_file):
    proc = subprocess.run([sys.executable, "-m", "qse", "verify", fig1_file],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "PASS"
