import csv
import io
import json
import subprocess
import sys

import pytest

from qpiii.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, read_config


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bilinear_exact(capsys):
    code, out, err = run(capsys, "bilinear", "--order", "4", "--mode", "exact")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["pass"] is True
    assert data["reports"][0]["residual_max"] == "0"
    assert "PASS" in err


def test_algebraic_minus_sign(capsys):
    code, out, _ = run(capsys, "algebraic", "--order", "4", "--sign", "-1", "--mode", "exact")
    assert code == EXIT_OK
    assert json.loads(out)["pass"] is True


def test_fiber_base_passes_above(capsys):
    code, out, _ = run(capsys, "fiber-base", "--order", "8", "--q", "0.5", "--u", "0.3", "--zz", "0.2")
    assert code == EXIT_OK
    rep = json.loads(out)["reports"][0]
    assert rep["direction"] == "above"
    assert float(rep["residual_max"]) > 1e-6


def test_failing_check_exits_one(capsys):
    code, out, err = run(capsys, "appendix-b", "--trials", "1", "--no-time")
    assert code == EXIT_FAIL
    assert json.loads(out)["pass"] is False
    assert "FAIL" in err


def test_amended_lozenge_passes(capsys):
    code, _, _ = run(capsys, "appendix-b", "--trials", "1", "--amended", "--no-time")
    assert code == EXIT_OK


@pytest.mark.parametrize(
    "argv",
    [
        ["nope"],
        [],
        ["bilinear", "--mode", "fuzzy"],
        ["bilinear", "--digits", "5"],
        ["bilinear", "--u", "abc"],
        ["algebraic", "--sign", "2"],
        ["bilinear", "--config", "/nonexistent/file.cfg"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert "usage error" in err


def test_reruns_are_byte_identical(capsys):
    argv = ["bilinear", "--mode", "numeric", "--order", "4", "--trials", "2", "--seed", "5", "--no-time"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert "wall_time_ms" not in first


def test_seed_changes_points(capsys):
    base = ["bilinear", "--mode", "numeric", "--order", "2", "--trials", "1", "--no-time"]
    _, a, _ = run(capsys, *base, "--seed", "1")
    _, b, _ = run(capsys, *base, "--seed", "2")
    assert a != b


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\norder = 2\nmode = exact\nout = csv\n")
    assert read_config(str(cfg)) == {"order": "2", "mode": "exact", "out": "csv"}
    code, out, _ = run(capsys, "bilinear", "--config", str(cfg), "--no-time")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["order"] == "2"
    code, out, _ = run(capsys, "bilinear", "--config", str(cfg), "--order", "3", "--out", "json", "--no-time")
    assert json.loads(out)["reports"][0]["order"] == 3


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    code, _, _ = run(capsys, "bilinear", "--config", str(cfg))
    assert code == EXIT_USAGE


def test_csv_output(capsys):
    code, out, _ = run(capsys, "fiber-base", "--out", "csv", "--trials", "1", "--no-time")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK
    assert rows[0]["check_name"] == "fiber-base"
    assert rows[0]["direction"] == "above"


def test_block_command(capsys):
    code, out, _ = run(capsys, "block", "--order", "1")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["0"] == "(1)"
    assert "a" in data["1"] and "b" in data["1"]


def test_block_numeric(capsys):
    code, out, _ = run(capsys, "block", "--order", "1", "--mode", "numeric", "--u", "0.3", "--q", "0.5")
    assert code == EXIT_OK
    assert set(json.loads(out)) == {"0", "1"}


def test_conjecture_flag(capsys):
    _, out, _ = run(capsys, "qtoda", "--trials", "1", "--digits", "30", "--no-time")
    assert all(r["conjecture"] for r in json.loads(out)["reports"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qpiii", "algebraic", "--order", "2", "--no-time"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pass"] is True
