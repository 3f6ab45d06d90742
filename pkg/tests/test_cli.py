import subprocess
import sys
from pathlib import Path

import pytest

from pufcodes.cli import main

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
DESK = str(CONFIGS / "desk.cfg")
RS73 = "type=rs m=3 n=7 k=3"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def kv(text):
    return dict(tok.split("=", 1) for line in text.splitlines() for tok in line.split() if "=" in tok)


def test_params(capsys):
    code, out, _ = run(capsys, "params", "--code", str(CONFIGS / "rm5_rs64.cfg"))
    assert code == 0 and kv(out)["unique_radius"] == "21" and kv(out)["list_radius"] == "27"
    code, out, _ = run(capsys, "params", "--code", str(CONFIGS / "rm5_rs34.cfg"))
    assert (kv(out)["d"], kv(out)["unique_radius"], kv(out)["list_radius"]) == ("13", "6", "7")
    code, out, _ = run(capsys, "params", "--code", RS73)
    assert (kv(out)["unique_radius"], kv(out)["list_radius"]) == ("2", "3")
    code, out, _ = run(capsys, "params", "--code", str(CONFIGS / "rm5_rs64.cfg"), "--tau", "27")
    assert (kv(out)["s"], kv(out)["l"]) == ("23", "40")


def test_params_radius_too_large(capsys):
    code, _, err = run(capsys, "params", "--code", RS73, "--tau", "4")
    assert code == 1 and "tau=4" in err


def test_bad_config_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("type=rs m=4 n=15\n")
    assert run(capsys, "params", "--code", str(bad))[0] == 2
    assert run(capsys, "params", "--code", str(tmp_path / "missing.cfg"))[0] == 2


def test_enroll_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "--seed", "7", "enroll", "--code", DESK, "--out", str(a))[0] == 0
    assert run(capsys, "enroll", "--code", DESK, "--seed", "7", "--out", str(b))[0] == 0
    for name in ("helper.txt", "response.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_reproduce_noiseless_and_masked(capsys, tmp_path):
    run(capsys, "enroll", "--code", DESK, "--seed", "3", "--out", str(tmp_path))
    response = (tmp_path / "response.txt").read_text().strip()
    code, out, _ = run(capsys, "reproduce", "--code", DESK, "--out", str(tmp_path), "--p", "0")
    assert code == 0 and kv(out)["key"] == response
    keys = []
    for mask in ("none", "codeword"):
        code, out, _ = run(capsys, "reproduce", "--code", DESK, "--out", str(tmp_path),
                           "--p", "0.02", "--seed", "5", "--mask", mask)
        keys.append(kv(out)["key"])
    assert keys[0] == keys[1] == response


def test_reproduce_runs(capsys, tmp_path):
    run(capsys, "enroll", "--code", DESK, "--seed", "4", "--out", str(tmp_path))
    code, out, _ = run(capsys, "reproduce", "--code", DESK, "--out", str(tmp_path),
                       "--p", "0.14", "--runs", "100", "--seed", "1")
    failures = int(kv(out)["failures"])
    # at p=0.14 and desk radius about 2% of runs fail (ties included)
    assert code == 0 and failures <= 8


def test_reproduce_missing_files(capsys, tmp_path):
    assert run(capsys, "reproduce", "--code", DESK, "--out", str(tmp_path / "none"))[0] == 2


def test_analyze(capsys, tmp_path):
    code, out, _ = run(capsys, "analyze", "--code", str(CONFIGS / "rm5_rs34.cfg"),
                       "--pe", "0.003170", "--pz", "0.017605")
    assert code == 0 and abs(float(kv(out)["P_err_list"]) / 1.9981e-10 - 1) < 0.2
    code, out, _ = run(capsys, "analyze", "--table1")
    assert "ratio=0.2582" in out and out.count("row=") == 3
    report = tmp_path / "report.txt"
    run(capsys, "analyze", "--code", str(CONFIGS / "rm5_rs64.cfg"), "--trials", "20000", "--out", str(report))
    assert "P_err_list=" in report.read_text()
    assert run(capsys, "analyze", "--code", str(CONFIGS / "rm5_rs64.cfg"), "--pe", "0.01")[0] == 2


def test_ct_audit(capsys):
    code, out, _ = run(capsys, "ct-audit", "--code", RS73, "--tau", "3")
    assert code == 0 and out.rstrip().endswith("verdict=PASS")
    code, out, _ = run(capsys, "ct-audit", "--code", RS73, "--tau", "3", "--fixture")
    assert code == 1 and "verdict=FAIL" in out
    code, out, _ = run(capsys, "ct-audit", "--code", "type=rm r=1 m=5", "--decoder", "rm")
    assert code == 0
    code, out, _ = run(capsys, "ct-audit", "--code", DESK, "--decoder", "concat", "--tau", "desk", "--runs", "20")
    assert code == 0
    code, out, _ = run(capsys, "ct-audit", "--code", RS73, "--tau", "2", "--erasures", "1", "--strict")
    assert code == 0


def test_console_script_help():
    res = subprocess.run([sys.executable, "-m", "pufcodes.cli", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "ct-audit" in res.stdout


def test_missing_subcommand():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
