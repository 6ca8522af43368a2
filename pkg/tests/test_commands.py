"""
Tests for the subcommands, their artifacts and the exit status of main().
"""

import csv
import json
import math

import pytest

from commands import build_run_config, cmd_simulate, cmd_spectrum, cmd_sweep, parse_float_list
from commands.common import format_cell, write_json
from commands.sweep import SWEEP_HEADER
from config.settings import Settings, SpectralSettings
from core.exceptions import ValidationError
from main import main
from models.schemas import RunConfig, SweepSpec


def _rows(path):
    with path.open(encoding="utf-8", newline="") as handle:
        return list(csv.reader(handle))


def _json(path):
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.fixture
def small_run(settings):
    return RunConfig(n=6, s=4, profile="linear", gamma=0.5, out_dir=settings.out)


class TestCommon:
    """Test merging and writers"""

    def test_precedence(self, settings):
        file_values = {"gamma": "0.5", "n": "8", "s": "4", "out": "from_file"}
        flags = {"gamma": 0.25, "n": None, "out": None}
        cfg = build_run_config(settings, file_values, flags)
        assert cfg.gamma == 0.25
        assert cfg.n == 8
        assert str(cfg.out_dir) == "from_file"
        assert cfg.t_max == settings.integrator.t_max

    def test_invalid_merge_raises_validation_error(self, settings):
        with pytest.raises(ValidationError):
            build_run_config(settings, {}, {"n": 5, "s": 6})

    def test_parse_float_list(self):
        assert parse_float_list("0.5, 1,2", "values") == [0.5, 1.0, 2.0]
        assert parse_float_list(None, "values") is None
        with pytest.raises(ValidationError):
            parse_float_list("a,b", "values")

    def test_format_cell(self):
        assert format_cell(0.1) == "0.1"
        assert format_cell(3) == "3"
        assert format_cell(True) == "true"
        assert format_cell(float("nan")) == "nan"

    def test_json_nan_becomes_null(self, tmp_path):
        path = write_json(tmp_path / "out.json", {"x": float("nan"), "y": [1.0, float("inf")]})
        assert _json(path) == {"x": None, "y": [1.0, None]}
        assert path.read_bytes().endswith(b"}\n")


class TestSimulate:
    """Test decay.csv and metrics.json"""

    def test_artifacts(self, small_run, settings):
        payload = cmd_simulate(small_run, settings=settings)

        rows = _rows(small_run.out_dir / "decay.csv")
        assert rows[0] == ["n", "gamma_n", "P_n"]
        assert len(rows) == 7
        assert [int(r[0]) for r in rows[1:]] == [1, 2, 3, 4, 5, 6]
        assert float(rows[3][1]) == pytest.approx(1.5)
        assert sum(float(r[2]) for r in rows[1:]) == pytest.approx(1.0, abs=1e-6)

        metrics = _json(small_run.out_dir / "metrics.json")
        for key in ("p1_over_pmin", "p1_over_ps", "edge_fraction", "pmin_index",
                    "residual", "method", "converged", "partial", "config"):
            assert key in metrics
        assert metrics["method"] == "ode"
        assert metrics["partial"] is False
        assert metrics["config"]["dt"] == pytest.approx(0.01 / 3.0)
        assert "gamma_n" not in metrics["config"]
        assert payload["pmin_index"] == metrics["pmin_index"]

    def test_single_cell(self, settings):
        cfg = RunConfig(n=1, s=1, out_dir=settings.out)
        cmd_simulate(cfg, settings=settings)
        rows = _rows(cfg.out_dir / "decay.csv")
        assert rows[1][0] == "1"
        assert float(rows[1][2]) == pytest.approx(1.0, abs=1e-6)
        metrics = _json(cfg.out_dir / "metrics.json")
        assert metrics["p1_over_pmin"] == 1.0
        assert metrics["pmin_index"] == 1

    def test_random_profile_echoes_rates(self, settings):
        cfg = RunConfig(n=5, s=3, profile="random", gamma_max=1.5, seed=3, out_dir=settings.out)
        cmd_simulate(cfg, settings=settings)
        metrics = _json(cfg.out_dir / "metrics.json")
        rates = [float(r[1]) for r in _rows(cfg.out_dir / "decay.csv")[1:]]
        assert metrics["config"]["gamma_n"] == rates

    def test_snapshots(self, small_run, settings):
        cmd_simulate(small_run, snapshots=[0.0, 2.0], settings=settings)
        rows = _rows(small_run.out_dir / "density.csv")
        assert rows[0] == ["t", "n", "density_A", "density_B"]
        assert len(rows) == 1 + 2 * 6
        start = [r for r in rows[1:] if float(r[0]) == 0.0 and r[1] == "4"][0]
        assert float(start[2]) == pytest.approx(1.0)
        later = sum(float(r[2]) + float(r[3]) for r in rows[1:] if float(r[0]) == 2.0)
        assert 0.0 < later < 1.0

    def test_summary_on_stdout(self, small_run, settings, capsys):
        cmd_simulate(small_run, settings=settings)
        out = capsys.readouterr().out
        assert "P_1 / P_min" in out
        assert "edge fraction" in out


class TestSpectrum:
    """Test spectrum files and spectral.json"""

    def test_artifacts(self, small_run, settings):
        payload = cmd_spectrum(small_run, settings=settings)
        out = small_run.out_dir

        for name in ("spectrum_open.csv", "spectrum_ring.csv"):
            rows = _rows(out / name)
            assert rows[0] == ["re", "im"]
            assert len(rows) == 1 + 12
        ipr = _rows(out / "ipr_open.csv")
        assert ipr[0] == ["re", "im", "ipr_A", "ipr_B"]
        assert not (out / "spectrum_bloch.csv").exists()

        summary = _json(out / "spectral.json")
        assert set(summary) == {"imaginary_gap_open", "imaginary_gap_ring", "hausdorff_distance",
                                "mean_A", "mean_B"}
        assert summary["mean_B"] == pytest.approx(payload["mean_B"])

    def test_uniform_profile_writes_bloch_bands(self, settings):
        cfg = RunConfig(n=6, s=4, out_dir=settings.out)
        cmd_spectrum(cfg, settings=settings)
        rows = _rows(cfg.out_dir / "spectrum_bloch.csv")
        assert rows[0] == ["k", "re", "im"]
        assert len(rows) == 1 + 2 * 512


class TestSweep:
    """Test sweep rows, warnings and ordering"""

    def test_single_value_matches_other_commands(self, settings, small_run):
        spec = SweepSpec(values=[0.5], base=small_run)
        cmd_sweep(spec, settings=settings)
        rows = _rows(small_run.out_dir / "sweep.csv")
        assert rows[0] == list(SWEEP_HEADER)
        row = [float(x) for x in rows[1]]

        spectral = cmd_spectrum(small_run, settings=settings)
        metrics = cmd_simulate(small_run, settings=settings)

        assert row[0] == 0.5
        assert row[1] == pytest.approx(spectral["mean_A"], rel=1e-12)
        assert row[2] == pytest.approx(spectral["mean_B"], rel=1e-12)
        assert row[3] == pytest.approx(metrics["p1_over_pmin"], rel=1e-12)
        assert row[4] == pytest.approx(metrics["p1_over_ps"], rel=1e-12)
        assert row[5] == pytest.approx(metrics["edge_fraction"], rel=1e-12)

    def test_failing_points_keep_rows(self, clean_env):
        strict = Settings(out=clean_env / "results", spectral=SpectralSettings(condition_bound=1.0))
        base = RunConfig(n=6, s=4, gamma=1.0, method="spectral", out_dir=strict.out)
        payload = cmd_sweep(SweepSpec(values=[0.5, 1.0], base=base), settings=strict)

        assert len(payload["warnings"]) == 2
        assert "ILL_CONDITIONED" in payload["warnings"][0]
        rows = _rows(strict.out / "sweep.csv")
        assert len(rows) == 3
        assert float(rows[1][0]) == 0.5
        assert all(math.isnan(float(x)) for x in rows[1][1:])

        summary = _json(strict.out / "sweep.json")
        assert summary["values"] == [0.5, 1.0]
        assert summary["warnings"] == payload["warnings"]

    def test_parallel_order_matches_serial(self, clean_env, settings):
        values = [0.25, 0.5, 1.0, 2.0]
        serial = RunConfig(n=5, s=3, profile="linear", out_dir=clean_env / "serial")
        parallel = RunConfig(n=5, s=3, profile="linear", out_dir=clean_env / "parallel")

        cmd_sweep(SweepSpec(values=values, base=serial), jobs=1, settings=settings)
        cmd_sweep(SweepSpec(values=values, base=parallel), jobs=2, settings=settings)

        assert (clean_env / "serial" / "sweep.csv").read_bytes() == \
            (clean_env / "parallel" / "sweep.csv").read_bytes()


class TestMain:
    """Test the command line end to end"""

    def test_simulate_ok(self, clean_env):
        status = main(["simulate", "--n", "6", "--s", "4", "--profile", "linear", "--gamma", "0.5",
                       "--out", "run"])
        assert status == 0
        assert (clean_env / "run" / "decay.csv").exists()

    def test_repeated_runs_are_byte_identical(self, clean_env):
        argv = ["simulate", "--n", "6", "--s", "4", "--profile", "random", "--gamma-max", "2",
                "--seed", "7"]
        assert main(argv + ["--out", "a"]) == 0
        assert main(argv + ["--out", "b"]) == 0
        for name in ("decay.csv", "metrics.json"):
            assert (clean_env / "a" / name).read_bytes() == (clean_env / "b" / name).read_bytes()

    def test_start_beyond_lattice_is_input_error(self, clean_env, capsys):
        assert main(["simulate", "--n", "5", "--s", "6", "--out", "run"]) == 2
        assert "input error" in capsys.readouterr().err

    def test_short_walk_writes_partial_result(self, clean_env):
        status = main(["simulate", "--n", "6", "--s", "4", "--t-max", "0.05", "--out", "run"])
        assert status == 1
        metrics = _json(clean_env / "run" / "metrics.json")
        assert metrics["partial"] is True
        assert metrics["converged"] is False

    def test_config_file_and_flag_precedence(self, clean_env):
        (clean_env / "run.env").write_text("n=8\ns=4\ngamma=0.5\nout=from_file\n", encoding="utf-8")
        assert main(["simulate", "--config", "run.env", "--gamma", "0.25"]) == 0
        config = _json(clean_env / "from_file" / "metrics.json")["config"]
        assert config["n"] == 8
        assert config["gamma"] == 0.25

    def test_unknown_config_key(self, clean_env):
        (clean_env / "run.env").write_text("colour=blue\n", encoding="utf-8")
        assert main(["simulate", "--config", "run.env", "--out", "run"]) == 2

    def test_bad_environment(self, clean_env, monkeypatch):
        monkeypatch.setenv("EDGEBURST_JOBS", "0")
        assert main(["spectrum", "--n", "4", "--s", "2", "--out", "run"]) == 2

    def test_sweep_with_failed_point_exits_one(self, clean_env, monkeypatch):
        monkeypatch.setenv("EDGEBURST_SPECTRAL_CONDITION_BOUND", "1.0")
        status = main(["sweep", "--n", "6", "--s", "4", "--method", "spectral", "--values", "0.5,1",
                       "--out", "run"])
        assert status == 1
        assert len(_rows(clean_env / "run" / "sweep.csv")) == 3

    def test_sweep_rejects_unsorted_values(self, clean_env):
        assert main(["sweep", "--n", "6", "--s", "4", "--values", "1,0.5", "--out", "run"]) == 2

    def test_spectrum(self, clean_env):
        assert main(["spectrum", "--n", "6", "--s", "4", "--out", "run"]) == 0
        assert (clean_env / "run" / "spectral.json").exists()

    def test_zero_jobs_flag_is_config_error(self, clean_env, capsys):
        assert main(["sweep", "--n", "6", "--s", "4", "--jobs", "0", "--out", "run"]) == 2
        assert "jobs" in capsys.readouterr().err
        assert not (clean_env / "run" / "sweep.csv").exists()

    def test_zero_jobs_flag_beats_environment(self, clean_env, monkeypatch):
        monkeypatch.setenv("EDGEBURST_JOBS", "2")
        assert main(["sweep", "--n", "6", "--s", "4", "--jobs", "0", "--out", "run"]) == 2
