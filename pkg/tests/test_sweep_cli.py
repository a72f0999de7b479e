import csv
import io

import pytest

from sdnfaas import cli
from sdnfaas.config import parse_scenario, save_scenario, shipped_scenario
from sdnfaas.sweep import grid_values, run_sweep, with_axis


@pytest.fixture(scope="module")
def grid_cfg():
    return parse_scenario(shipped_scenario("paper_grid"))


def test_grid_values():
    assert grid_values(20, 100, 10) == [20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0]
    assert grid_values(0.15, 0.85, 0.1)[-1] == 0.85
    with pytest.raises(ValueError):
        grid_values(0, 1, 0)


def test_lambda_axis_scales_aggregate(grid_cfg):
    v = with_axis(grid_cfg, "lambda", 100.0)
    assert sum(fc.lambda_per_slot[0] for fc in v.functions) == pytest.approx(100.0)


def test_lambda_sweep_trend(grid_cfg):
    res = run_sweep(grid_cfg, "lambda", grid_values(20, 100, 20), seeds=(1,), simulate=False, workers=1)
    assert len(res.rows) == 5 and res.passed
    assert [r["value"] for r in res.rows] == [20.0, 40.0, 60.0, 80.0, 100.0]


def test_replica_sweep_trend(grid_cfg):
    res = run_sweep(grid_cfg, "replicas", grid_values(2, 10, 1), seeds=(1,), simulate=False, workers=1)
    assert res.passed, res.checks


def test_power_only_axes(grid_cfg):
    res = run_sweep(grid_cfg, "containers", grid_values(1, 10, 1), seeds=(1,), workers=1)
    assert res.passed
    assert all(r.get("sim_events") is None for r in res.rows)
    res = run_sweep(grid_cfg, "utilization", grid_values(0, 1, 0.25), seeds=(1,), workers=1)
    assert res.passed


def test_bad_point_does_not_abort(grid_cfg):
    res = run_sweep(grid_cfg, "containers", [1, 500, 2], seeds=(1,), workers=1)
    status = [r["status"] for r in res.rows]
    assert not res.passed
    assert status[0] == "ok" and status[1].startswith("error:OverCapacity") and status[2] == "ok"


def test_parallel_matches_serial():
    cfg = parse_scenario(shipped_scenario("coldstart_sweep"))
    vals = [0.15, 0.5, 0.85]
    a = run_sweep(cfg, "cold_delay", vals, seeds=(1,), workers=1)
    b = run_sweep(cfg, "cold_delay", vals, seeds=(1,), workers=2)
    assert a.rows == b.rows
    assert a.passed


def read_csv(path):
    return list(csv.DictReader(io.StringIO(path.read_text())))


class TestCli:
    def test_analytic(self, tmp_path, capsys):
        assert cli.main(["analytic", "paper_grid", "--out", str(tmp_path)]) == 0
        rows = read_csv(tmp_path / "report.csv")
        assert len(rows) == 20 and rows[0]["status"] == "ok"
        assert (tmp_path / "trace.csv").exists() and (tmp_path / "summary.txt").exists()
        assert "general_eq7" in capsys.readouterr().out

    def test_simulate_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for d in (a, b):
            assert cli.main(["simulate", "coldstart_sweep", "--seed", "4", "--horizon", "120", "--out", str(d)]) == 0
        for name in ("report.csv", "trace.csv", "summary.txt"):
            assert (a / name).read_bytes() == (b / name).read_bytes()
        assert "conservation=ok" in (a / "summary.txt").read_text()

    def test_compare_exit_codes(self, tmp_path):
        args = ["compare", "mm1_oracle", "--seeds", "1", "--horizon", "20000", "--out", str(tmp_path)]
        assert cli.main(args) == 0
        assert cli.main(args + ["--tol-m1", "1e-9", "--tol-mn", "1e-9", "--tol-power", "1e-9"]) == 1

    def test_config_error_exit_2(self, tmp_path, capsys):
        cfg = parse_scenario(shipped_scenario("mm1_oracle"))
        p = tmp_path / "bad.toml"
        save_scenario(cfg, p)
        p.write_text(p.read_text().replace("lambda = [\n    2.5,", "lambda = [\n    -2.5,", 1))
        assert cli.main(["analytic", str(p), "--out", str(tmp_path)]) == 2
        assert "functions[0].lambda" in capsys.readouterr().err
        assert cli.main(["analytic", str(tmp_path / "missing.toml")]) == 2

    def test_env_output_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv(cli.OUTPUT_ENV, str(tmp_path / "env"))
        assert cli.main(["analytic", "mdn_oracle"]) == 0
        assert (tmp_path / "env" / "report.csv").exists()

    def test_sweep(self, tmp_path):
        args = ["sweep", "paper_grid", "--axis", "lambda", "--from", "20", "--to", "100", "--step", "20",
                "--analytic-only", "--seeds", "1", "--workers", "1", "--out", str(tmp_path)]  # fmt: skip
        assert cli.main(args) == 0
        assert len(read_csv(tmp_path / "report.csv")) == 5

    def test_unstable_marker_in_csv(self, tmp_path):
        assert cli.main(["sweep", "paper_grid", "--axis", "lambda", "--from", "500", "--to", "500",
                         "--step", "1", "--analytic-only", "--seeds", "1", "--out", str(tmp_path)]) == 1  # fmt: skip
        row = read_csv(tmp_path / "report.csv")[0]
        assert row["an_T"] == "UNSTABLE" and row["status"].startswith("unstable")
