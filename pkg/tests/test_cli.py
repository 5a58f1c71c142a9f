import json
import math
import subprocess
import sys

import pytest

from csltrap.cli import run_command
from csltrap.tables import OutputTable, read_csv, to_csv, to_json


def run(args, capsys):
    code = run_command(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def table(text):
    return read_csv(text)


def test_chi_max(capsys):
    code, out, _ = run(["chi"], capsys)
    assert code == 0
    meta, t = table(out)
    assert t.columns == ["x", "chi_sphere", "chi_cube"]
    assert len(t.rows) == 200
    assert max(t.column("chi_sphere")) == pytest.approx(1.7202, abs=0.005)
    assert meta["command"] == "chi" and len(meta["config_sha256"]) == 64 and meta["seed"] == "0"


def test_err_reference(capsys):
    cfg_code, out, _ = run(["err"], capsys)
    _, t = table(out)
    assert cfg_code == 0
    assert t.column("upsilon_nK_per_min")[0] == pytest.approx(6.8, rel=0.01)


def test_bound(capsys):
    code, out, _ = run(["bound"], capsys)
    assert code == 0
    _, t = table(out)
    assert t.column("p_max")[0] == pytest.approx(7e-13, rel=0.1)
    assert t.column("collision_interval")[0] == pytest.approx(90, rel=0.15)


def test_budget_and_detect(capsys):
    code, out, _ = run(["budget"], capsys)
    _, t = table(out)
    assert code == 0
    assert t.column("dominant_noise_source") == ["collision"]
    assert t.column("detectable") == ["true"]
    code, out, _ = run(["detect"], capsys)
    _, t = table(out)
    assert t.column("E0_over_kB")[0] == pytest.approx(2.4, rel=0.01)
    assert 20 < t.column("detection_time")[0] < 24


def test_sweep(capsys, tmp_path):
    path = tmp_path / "sweep.csv"
    code, out, _ = run(["sweep", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    _, t = table(path.read_text())
    assert t.units == ["m", "Hz", "W", "W", "W"]
    assert len(t.rows) == 200


def test_csv_json_same_values(capsys, tmp_path):
    cfg = tmp_path / "small.cfg"
    cfg.write_text("map.r_c_points = 5\n")
    _, csv_text, _ = run(["map", "--config", str(cfg)], capsys)
    _, json_text, _ = run(["map", "--config", str(cfg), "--format", "json"], capsys)
    meta, t = table(csv_text)
    payload = json.loads(json_text)
    assert payload["metadata"]["config_sha256"] == meta["config_sha256"]
    assert payload["units"] == dict(zip(t.columns, t.units))
    for name in t.columns:
        assert payload["columns"][name] == t.column(name)


def test_provenance_header(capsys):
    _, out, _ = run(["err", "--seed", "9"], capsys)
    lines = out.splitlines()
    assert lines[0].startswith("# tool: csltrap ")
    assert lines[1] == "# command: err"
    assert lines[2].startswith("# config_sha256: ")
    assert lines[3] == "# seed: 9"


def test_config_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("trap.d = 0.01\nbody.L = -1\n")
    code, out, err = run(["err", "--config", str(bad)], capsys)
    assert code == 1 and out == ""
    assert "body.L" in err and "line 2" in err


def test_usage_errors(capsys):
    assert run([], capsys)[0] == 1
    assert run(["frobnicate"], capsys)[0] == 1
    assert run(["map", "--threads", "0"], capsys)[0] == 1
    assert run(["err", "--format", "xml"], capsys)[0] == 1


def test_numerical_error_exit_code(capsys, tmp_path):
    cfg = tmp_path / "neutral.cfg"
    cfg.write_text("body.charge = 0\n")
    code, _, err = run(["budget", "--config", str(cfg)], capsys)
    assert code == 2
    assert "numerical error" in err


def test_cube_bound_is_unsupported(capsys, tmp_path):
    cfg = tmp_path / "cube.cfg"
    cfg.write_text("body.shape = cube\n")
    assert run(["bound", "--config", str(cfg)], capsys)[0] == 2
    assert run(["err", "--config", str(cfg)], capsys)[0] == 0


def test_map_thread_count_byte_identical(capsys):
    _, one, _ = run(["map", "--threads", "1"], capsys)
    _, eight, _ = run(["map", "--threads", "8"], capsys)
    assert one == eight


def test_oracle_thread_count_byte_identical(capsys, tmp_path):
    cfg = tmp_path / "o.cfg"
    cfg.write_text("sim.ensemble_size = 8\n")
    _, one, _ = run(["oracle", "--config", str(cfg), "--threads", "1"], capsys)
    _, eight, _ = run(["oracle", "--config", str(cfg), "--threads", "8"], capsys)
    assert one == eight
    _, t = table(one)
    assert t.column("check") == ["white_force", "one_over_f_force", "position_noise", "collisions"]


def test_tables_round_trip():
    t = OutputTable(["a", "b", "c"], ["m", "-", "-"])
    t.append(0.1, "x", True)
    t.append(1 / 3, "y", False)
    meta, back = read_csv(to_csv(t, {"k": "v"}))
    assert meta == {"k": "v"}
    assert back.column("a") == [0.1, 1 / 3]
    assert back.column("c") == ["true", "false"]
    payload = json.loads(to_json(OutputTable(["a"], ["1"], [(math.nan,)]), {}))
    assert payload["columns"]["a"] == [None]
    with pytest.raises(ValueError):
        t.append(1.0)


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "csltrap.cli", "err", "--format", "json"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["metadata"]["command"] == "err"
