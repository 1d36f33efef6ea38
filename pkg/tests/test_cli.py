import csv
import io
import json
import math
import subprocess
import sys

import pytest

from casimir_mirrors.cli import (
    EXIT_CONFIG,
    EXIT_NONCONVERGED,
    EXIT_OK,
    FORCE_COLUMNS,
    PLASMON_COLUMNS,
    main,
    parse_config_text,
)
from casimir_mirrors.dispersion import Cavity, plasma_mirror
from casimir_mirrors.errors import ConfigError
from casimir_mirrors.plasmons import plasmon_energy

EQUAL = """\
mirror_a.epsilon.strength = 1e16
mirror_b.epsilon.strength = 1e16
distances.lambda_min = 1e-1
distances.lambda_max = 1e2
distances.count = 4
"""


def _write(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_force_csv(tmp_path, capsys):
    assert main(["force", "--config", _write(tmp_path, EQUAL)]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.splitlines()[0] == ",".join(FORCE_COLUMNS)
    rows = _rows(out)
    assert len(rows) == 4
    # plasma mirrors at Lambda = 100: 1 - 16 / (3 Lambda) to leading order
    assert float(rows[-1]["eta_F"]) == pytest.approx(1 - 16 / 300, rel=5e-3)
    assert all(r["status"] == "ok" for r in rows)


def test_csv_twelve_significant_digits(tmp_path, capsys):
    main(["force", "--config", _write(tmp_path, EQUAL)])
    row = capsys.readouterr().out.splitlines()[1].split(",")
    mant = row[2].split("e")[0].lstrip("-")
    assert len(mant.replace(".", "")) == 12


def test_magnetodielectric_rows_turn_negative(tmp_path, capsys):
    cfg = EQUAL.replace("mirror_b", "mirror_a.mu.strength = 1.2e16\nmirror_b", 1)
    main(["force", "--config", _write(tmp_path, cfg)])
    eta = [float(r["eta_F"]) for r in _rows(capsys.readouterr().out)]
    assert eta[0] > 0 > eta[-1]


def test_json_round_trip_bit_identical(tmp_path):
    cfg = _write(tmp_path, EQUAL)
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    assert main(["force", "--config", cfg, "--format", "json", "--out", str(first)]) == EXIT_OK
    assert main(["force", "--config", str(first), "--format", "json", "--out", str(second), "--jobs", "2"]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    data = json.loads(first.read_text())
    assert data["columns"] == FORCE_COLUMNS and len(data["rows"]) == 4


def test_jobs_do_not_change_output(tmp_path, capsys):
    cfg = _write(tmp_path, EQUAL)
    main(["force", "--config", cfg])
    one = capsys.readouterr().out
    main(["force", "--config", cfg, "--jobs", "3"])
    assert capsys.readouterr().out == one


def test_parse_error_reports_line(tmp_path, capsys):
    cfg = _write(tmp_path, EQUAL + "tolerances.rel_tol = many\n")
    assert main(["force", "--config", cfg]) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "line 6" in err and "tolerances.rel_tol" in err


def test_unknown_and_duplicate_keys():
    with pytest.raises(ConfigError, match="unknown"):
        parse_config_text("mirror_a.epsilon.colour = 1\n")
    with pytest.raises(ConfigError, match="line 2"):
        parse_config_text("run.jobs = 1\nrun.jobs = 2\n")
    with pytest.raises(ConfigError, match="line 1"):
        parse_config_text("no equals sign\n")


def test_empty_grid_is_usage_error(tmp_path, capsys):
    cfg = EQUAL.replace("distances.count = 4", "distances.count = 0")
    assert main(["force", "--config", _write(tmp_path, cfg)]) == EXIT_CONFIG
    cfg = EQUAL.replace("lambda_max = 1e2", "lambda_max = 1e-2")
    assert main(["force", "--config", _write(tmp_path, cfg)]) == EXIT_CONFIG
    assert "distances" in capsys.readouterr().err


def test_negative_frequency_rejected(tmp_path):
    cfg = EQUAL.replace("mirror_b.epsilon.strength = 1e16", "mirror_b.epsilon.strength = -1e16")
    assert main(["force", "--config", _write(tmp_path, cfg)]) == EXIT_CONFIG


def test_nonconvergence_exit_code(tmp_path, capsys):
    cfg = EQUAL + "tolerances.max_subdivisions = 3\ntolerances.rel_tol = 1e-12\n"
    assert main(["force", "--config", _write(tmp_path, cfg)]) == EXIT_NONCONVERGED
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 4
    assert any(r["status"].startswith("nonconverged") and r["F"] == "nan" for r in rows)


def test_plasmon_table_and_dispersion(tmp_path, capsys):
    cfg = EQUAL.replace("1e16\ndist", "0.8e16\ndist").replace("lambda_max = 1e2", "lambda_max = 1e1")
    disp = tmp_path / "disp.csv"
    assert main(["plasmon", "--config", _write(tmp_path, cfg), "--dispersion-out", str(disp)]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.splitlines()[0] == ",".join(PLASMON_COLUMNS)
    for r in _rows(out):
        assert float(r["E_TM_plus"]) > 0 > float(r["E_TM_minus"])
        total = float(r["E_total"])
        assert float(r["E_plasmon"]) + float(r["E_photon"]) == pytest.approx(total, rel=1e-10)
    for r in _rows(disp.read_text()):
        if r["omega_minus"] != "nan":
            assert float(r["omega_minus"]) <= float(r["omega_light"])


def test_plasmon_rejects_drude(tmp_path, capsys):
    cfg = EQUAL + "mirror_b.epsilon.damping = 1e14\n"
    assert main(["plasmon", "--config", _write(tmp_path, cfg)]) == EXIT_CONFIG
    assert "plasma" in capsys.readouterr().err


def test_plasmon_boyer_energy_column(tmp_path, capsys):
    cfg = """\
mirror_a.epsilon.strength = 1e16
mirror_b.mu.strength = 1e16
distances.lambda_min = 1e-4
distances.lambda_max = 1e-3
distances.count = 3
"""
    assert main(["plasmon", "--config", _write(tmp_path, cfg)]) == EXIT_OK
    a, b = plasma_mirror(omega_e=1e16), plasma_mirror(omega_m=1e16)
    for r in _rows(capsys.readouterr().out):
        cav = Cavity(a, b, float(r["L"]))
        assert float(r["E_plasmon"]) == pytest.approx(plasmon_energy(cav), rel=1e-6)
        assert r["E_TM_minus"] == "nan" or float(r["E_TM_minus"]) == 0.0


def test_asymptote_short(tmp_path, capsys):
    cfg = EQUAL.replace("lambda_min = 1e-1", "lambda_min = 1e-4").replace("lambda_max = 1e2", "lambda_max = 1e-2")
    assert main(["asymptote", "--config", _write(tmp_path, cfg), "--regime", "short"]) == EXIT_OK
    for r in _rows(capsys.readouterr().out):
        assert abs(float(r["rel_dev"])) < 2e-2


def test_asymptote_regime_mismatch(tmp_path, capsys):
    assert main(["asymptote", "--config", _write(tmp_path, EQUAL), "--regime", "boyer-short"]) == EXIT_CONFIG
    assert "magnetic" in capsys.readouterr().err


def test_asymptote_boyer_long(tmp_path, capsys):
    cfg = """\
mirror_a.epsilon.strength = 1e16
mirror_b.mu.strength = 1e16
distances.lambda_min = 1e3
distances.lambda_max = 1e3
distances.count = 1
"""
    assert main(["asymptote", "--config", _write(tmp_path, cfg), "--regime", "boyer-long"]) == EXIT_OK
    row = _rows(capsys.readouterr().out)[0]
    assert float(row["F_full"]) / float(row["F_asymptote"]) == pytest.approx(1.0, rel=1e-2)


def test_threshold_json(capsys):
    assert main(["threshold", "--format", "json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert {"alpha0", "eta_at_1"} <= set(data)
    assert data["eta_at_1"] == pytest.approx(0.0205, abs=1e-3)
    lo, hi = data["bracket"]
    assert lo < data["alpha0"] < hi
    signs = [math.copysign(1, eta) for alpha, eta in data["samples"] if alpha != data["alpha0"]]
    assert signs[0] > 0 and signs[-1] < 0


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "casimir_mirrors", "force", "--config", _write(tmp_path, EQUAL), "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "force"
