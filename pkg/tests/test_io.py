"""Config parsing, CSV/manifest/F2D1 round-trips, CLI exit codes."""

import json

import numpy as np
import pytest

from dmnls.cli import main
from dmnls.experiments import CSV_COLUMNS, ExperimentReport, RunRow
from dmnls.grid import band_limited_field, make_grid, mass
from dmnls.io import (
    RunConfig,
    UsageError,
    parse_config,
    read_csv_rows,
    read_field,
    write_field,
    write_report,
)


class TestParseConfig:
    def test_defaults(self):
        config = parse_config(["selftest"])
        assert config.experiment == "selftest"
        assert config.grid_n == 256
        assert config.quad_nodes == 8

    def test_lambda_list_flag(self):
        config = parse_config(["limit-study", "--lambda-list", "1,0.5,0.25"])
        assert config.lambda_list == (1.0, 0.5, 0.25)

    def test_lambda_list_order_validated(self):
        with pytest.raises(UsageError):
            parse_config(["limit-study", "--lambda-list", "0.25,0.5,1"])

    def test_grid_n_power_of_two(self):
        with pytest.raises(UsageError, match="power of two"):
            parse_config(["selftest", "--grid-n", "100"])

    def test_unknown_flag_rejected(self):
        with pytest.raises(UsageError, match="unknown config key"):
            parse_config(["selftest", "--grid-m", "64"])

    def test_unknown_experiment_rejected(self):
        with pytest.raises(UsageError, match="unknown experiment"):
            parse_config(["warp-drive"])

    def test_config_file_and_precedence(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("grid_n = 64\ndt = 0.002  # coarse\nseed = 5\n")
        config = parse_config(
            ["limit-study", "--config", str(cfg), "--dt", "0.001"]
        )
        assert config.grid_n == 64
        assert config.dt == 0.001  # flag wins over file
        assert config.seed == 5

    def test_config_file_unknown_key(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("grid_m = 64\n")
        with pytest.raises(UsageError, match="grid_m"):
            parse_config(["selftest", "--config", str(cfg)])


def one_row_report():
    row = RunRow(
        lam=0.5,
        grid_n=64,
        box_length=8 * np.pi,
        dt=1e-3,
        window=2.0,
        err_linf_l2=0.123456789012345678,
        err_l4=1 / 3,
        runtime_sec=1.5,
    )
    return ExperimentReport("limit-study", [row], {"err_linf_l2_vs_lambda": -2.0})


class TestWriteReport:
    def test_empty_rows_rejected(self):
        with pytest.raises(ValueError):
            ExperimentReport("limit-study", [])

    def test_csv_header_contract(self, tmp_path):
        paths = write_report(one_row_report(), tmp_path)
        header = paths["csv"].read_text().splitlines()[0]
        assert header == (
            "lambda,eta,grid_n,box_length,dt,window,err_linf_l2,err_l4,defect_rel,"
            "low_term,high_term,dm_high_term,mass_drift_nls,mass_drift_dmnls,"
            "boundary_mass,runtime_sec"
        )

    def test_csv_round_trip_exact(self, tmp_path):
        report = one_row_report()
        paths = write_report(report, tmp_path)
        rows = read_csv_rows(paths["csv"])
        assert rows[0]["lambda"] == 0.5
        assert rows[0]["err_linf_l2"] == report.rows[0].err_linf_l2
        assert rows[0]["err_l4"] == 1 / 3  # shortest round-trip formatting
        assert rows[0]["eta"] is None  # unused column stays empty

    def test_manifest_contains_config_and_slopes(self, tmp_path):
        config = RunConfig(experiment="limit-study").validate()
        paths = write_report(one_row_report(), tmp_path, config)
        manifest = json.loads(paths["manifest"].read_text())
        assert manifest["config"]["grid_n"] == 256
        assert manifest["fitted_slopes"]["err_linf_l2_vs_lambda"] == -2.0
        assert manifest["experiment"] == "limit-study"

    def test_snapshot_round_trip(self, tmp_path, rng):
        g = make_grid(8 * np.pi, 32)
        f = band_limited_field(g, 4, rng)
        paths = write_report(one_row_report(), tmp_path, snapshots={"initial": f})
        back = read_field(paths["snapshot:initial"])
        assert back.grid == f.grid
        assert mass(back - f) == 0.0


class TestF2D1:
    def test_layout(self, tmp_path, rng):
        g = make_grid(2 * np.pi, 8)
        f = band_limited_field(g, 2, rng)
        p = tmp_path / "f.f2d"
        write_field(f, p)
        raw = p.read_bytes()
        assert raw[:4] == b"F2D1"
        assert int.from_bytes(raw[4:8], "little") == 8
        assert np.frombuffer(raw[8:16], dtype="<f8")[0] == 2 * np.pi
        assert len(raw) == 16 + 8 * 8 * 16

    def test_bad_magic(self, tmp_path):
        p = tmp_path / "junk.f2d"
        p.write_bytes(b"NOPE" + bytes(16))
        with pytest.raises(ValueError, match="magic"):
            read_field(p)


class TestCLI:
    def test_usage_error_exit_2(self, capsys):
        assert main(["unknown-experiment"]) == 2
        assert "usage error" in capsys.readouterr().err

    def test_bad_flag_exit_2(self, capsys):
        assert main(["selftest", "--grid-n", "100"]) == 2

    def test_selftest_exit_0(self, capsys):
        assert main(["selftest"]) == 0
        assert "selftest" in capsys.readouterr().out

    def test_strichartz_probe_writes_report(self, tmp_path):
        code = main(
            [
                "strichartz-probe",
                "--grid-n", "32",
                "--box-length", "6.283185307179586",
                "--count", "2",
                "--t-final", "0.5",
                "--output-dir", str(tmp_path / "out"),
            ]
        )
        assert code == 0
        rows = read_csv_rows(tmp_path / "out" / "report.csv")
        assert len(rows) == 2
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert len(manifest["extras"]["ratio_stats"]) == 2
