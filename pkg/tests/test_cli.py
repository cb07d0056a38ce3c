import json

import pytest

from udw_harvest.cli import main
from udw_harvest.sweep import read_result_csv


def test_point_human_readable(capsys):
    rc = main(["point", "--scenario", "parallel", "--a", "1", "--omega", "0.5", "--L", "1"])
    out = capsys.readouterr().out
    assert rc == 0
    for label in ("L_AA", "L_AB", "M", "I_AB", "C_AB"):
        assert label in out


def test_point_json(capsys):
    rc = main(["point", "--scenario", "inertial", "--omega", "1", "--L", "1", "--json"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["scenario"] == "inertial"
    assert data["L_AA"] > 0
    assert data["mutual_info"] >= 0
    assert data["lambda"] == 0.1


def test_point_thermal_state(capsys):
    rc = main(["point", "--scenario", "inertial", "--omega", "1", "--L", "1",
               "--state", "thermal", "--temperature", "0.5", "--json"])
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["state"] == "thermal"


def test_point_thermal_needs_temperature(capsys):
    rc = main(["point", "--scenario", "inertial", "--omega", "1", "--L", "1",
               "--state", "thermal"])
    assert rc == 1
    err = capsys.readouterr().err
    payload = json.loads(err.strip().splitlines()[-1])
    assert payload["error"] == "ValueError"


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["point", "--scenario", "spiral", "--omega", "1", "--L", "1"])
    assert exc.value.code == 2


def test_sweep_writes_csv(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    rc = main(["sweep", "--scenario", "anti-parallel", "--a", "1", "--omega", "0.5",
               "--L", "1", "--out", str(out)])
    assert rc == 0
    rows = read_result_csv(out)
    assert len(rows) == 1
    assert rows[0].scenario == "anti-parallel"


def test_sweep_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "sweep.ini"
    out = tmp_path / "conf.csv"
    cfg.write_text(
        "[sweep]\n"
        "scenario = anti-parallel\n"
        "a = 1\n"
        "omega = 0.5\n"
        "L = 1\n"
        f"out = {out}\n"
        "coupling = 0.1\n"
    )
    rc = main(["sweep", "--config", str(cfg), "--omega", "2"])  # flag wins
    assert rc == 0
    rows = read_result_csv(out)
    assert rows[0].omega_sigma == 2.0
    assert rows[0].lam == 0.1


def test_sweep_requires_grid(capsys):
    rc = main(["sweep", "--scenario", "parallel"])
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_report_table(tmp_path, capsys):
    out = tmp_path / "eq.csv"
    rc = main(["report", "--a", "1", "--omega", "0.5", "--out", str(out)])
    assert rc == 0
    text = capsys.readouterr().out
    assert "rel_deviation" in text
    assert out.read_text().count("\n") == 2  # header + one row


def test_verify_fast(capsys):
    rc = main(["verify", "--fast"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS" in out
    assert "FAIL" not in out
    assert "all checks passed" in out
