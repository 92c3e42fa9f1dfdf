#!/usr/bin/env python3
"""Tests for the command line, persistent config and display helpers."""

import json

import pandas as pd
import pytest
from typer.testing import CliRunner

from slls import __version__, cli, config, harness
from slls.config import (
    Config,
    env_seed,
    load_config,
    load_run_config,
    save_config,
    set_config_value,
)
from slls.utils import format_bounds, format_number, format_vector, parse_values

runner = CliRunner()


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Point the persistent config at a temp file and clear the seed override."""
    path = tmp_path / "config" / "config.toml"
    monkeypatch.setattr(config, "get_config_path", lambda: path)
    monkeypatch.setattr(cli, "get_config_path", lambda: path)
    monkeypatch.delenv("SLLS_SEED", raising=False)
    return path


class TestParseValues:
    """Tests for parse_values()."""

    def test_integers(self):
        assert parse_values("5,10,15") == [5.0, 10.0, 15.0]

    def test_spaces_and_trailing_comma(self):
        assert parse_values(" 0.3, 0.4 ,") == [0.3, 0.4]

    def test_empty(self):
        with pytest.raises(ValueError):
            parse_values(" , ")

    def test_not_numbers(self):
        with pytest.raises(ValueError):
            parse_values("a,b")


class TestFormatting:
    """Tests for display formatting."""

    def test_float(self):
        assert format_number(0.31365661) == "0.313657"

    def test_small_float(self):
        assert format_number(0.00128) == "0.00128"

    def test_int(self):
        assert format_number(80000) == "80000"

    def test_none(self):
        assert format_number(None) == "-"

    def test_nan(self):
        assert format_number(float("nan")) == "nan"

    def test_vector(self):
        assert format_vector([70.0, 90.0, 1.0]) == "[70, 90, 1]"

    def test_bounds(self):
        assert format_bounds([-100.0, 100.0]) == "[-100, 100]"
        assert format_bounds([[0.0, 1.0], [2.0, 3.0]]) == "per-dimension"


class TestConfig:
    """Tests for the persistent TOML config."""

    def test_missing_file_gives_defaults(self, isolated_config):
        assert load_config(isolated_config) == Config()

    def test_save_and_load(self, isolated_config):
        cfg = Config(snakes=30, gamma=8.0)
        cfg.penalty.rho = 1e5
        save_config(cfg, isolated_config)
        loaded = load_config(isolated_config)
        assert loaded.snakes == 30
        assert loaded.gamma == 8.0
        assert loaded.penalty.rho == 1e5
        assert loaded.iters is None

    def test_set_value(self, isolated_config):
        set_config_value("iters", "250", isolated_config)
        set_config_value("penalty.eq_tolerance", "0.001", isolated_config)
        loaded = load_config(isolated_config)
        assert loaded.iters == 250
        assert loaded.penalty.eq_tolerance == 0.001

    def test_set_unknown_key(self, isolated_config):
        with pytest.raises(ValueError):
            set_config_value("warp", "1", isolated_config)

    def test_corrupt_file_gives_defaults(self, isolated_config):
        isolated_config.parent.mkdir(parents=True)
        isolated_config.write_text("[defaults\nsnakes = ")
        assert load_config(isolated_config) == Config()

    def test_bad_value_keeps_other_settings(self, isolated_config, caplog):
        isolated_config.parent.mkdir(parents=True)
        isolated_config.write_text(
            '[defaults]\nsnakes = "many"\nruns = 7\n\n[penalty]\nrho = 1e5\neq_tolerance = [1]\n'
        )
        with caplog.at_level("WARNING", logger="slls.config"):
            loaded = load_config(isolated_config)
        assert loaded.snakes is None
        assert loaded.runs == 7
        assert loaded.penalty.rho == 1e5
        assert loaded.penalty.eq_tolerance is None
        assert "snakes" in caplog.text
        assert "penalty.eq_tolerance" in caplog.text

    def test_run_config_json(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"half-circles": 3, "snakes": 10}))
        assert load_run_config(path) == {"half_circles": 3, "snakes": 10}

    def test_run_config_toml(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text('problem = "F1"\ntouch-points = 6\n\n[penalty]\nrho = 100.0\n')
        assert load_run_config(path) == {"problem": "F1", "touch_points": 6, "rho": 100.0}

    def test_run_config_must_be_object(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("[1, 2]")
        with pytest.raises(ValueError):
            load_run_config(path)

    def test_env_seed(self, monkeypatch):
        assert env_seed() is None
        monkeypatch.setenv("SLLS_SEED", "17")
        assert env_seed() == 17
        monkeypatch.setenv("SLLS_SEED", "x")
        with pytest.raises(ValueError):
            env_seed()


class TestCli:
    """End-to-end tests of the slls commands."""

    def test_version(self):
        result = runner.invoke(cli.app, ["--version"])
        assert result.exit_code == 0
        assert f"slls {__version__}" in result.stdout

    def test_list_problems_json(self):
        result = runner.invoke(cli.app, ["list-problems", "--json", "--dim", "10"])
        assert result.exit_code == 0
        descriptors = json.loads(result.stdout)
        assert len(descriptors) == 37
        by_name = {d["name"]: d for d in descriptors}
        assert by_name["F1"]["dim"] == 10
        assert by_name["rolling_bearing"]["maximize"] is True

    def test_list_problems_table(self):
        result = runner.invoke(cli.app, ["list-problems"])
        assert result.exit_code == 0
        assert "F1" in result.stdout

    def test_run_writes_outputs(self, tmp_path):
        out, csv, trace = tmp_path / "s.json", tmp_path / "r.csv", tmp_path / "t.csv"
        result = runner.invoke(
            cli.app,
            [
                "run", "-p", "F1", "--dim", "3", "--snakes", "5", "--iters", "8", "--runs", "2",
                "--seed", "4", "--out", str(out), "--csv", str(csv), "--trace", str(trace),
            ],
        )
        assert result.exit_code == 0, result.output
        summary = json.loads(out.read_text())
        assert summary["n_runs"] == 2
        assert summary["base_seed"] == 4
        assert summary["config"]["n_snakes"] == 5
        assert [r["seed"] for r in summary["runs"]] == [4, 5]
        assert len(pd.read_csv(csv)) == 2
        assert len(pd.read_csv(trace)) == 8
        assert (tmp_path / "t.trail.csv").exists()
        assert "✓ Wrote" in result.stdout

    def test_run_config_file_and_flags(self, tmp_path):
        run_file = tmp_path / "run.json"
        run_file.write_text(json.dumps({"snakes": 4, "iters": 3, "runs": 1, "gamma": 9}))
        out = tmp_path / "s.json"
        result = runner.invoke(
            cli.app,
            ["run", "-p", "F2", "--dim", "2", "--snakes", "6", "--config", str(run_file),
             "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        settings = json.loads(out.read_text())["config"]
        assert settings["n_snakes"] == 6
        assert settings["T"] == 3
        assert settings["gamma"] == 9.0

    def test_run_persistent_defaults(self, tmp_path, isolated_config):
        set_config_value("iters", "4", isolated_config)
        set_config_value("runs", "1", isolated_config)
        out = tmp_path / "s.json"
        result = runner.invoke(
            cli.app, ["run", "-p", "F1", "--dim", "2", "--snakes", "3", "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        assert json.loads(out.read_text())["config"]["T"] == 4

    def test_run_seed_from_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SLLS_SEED", "21")
        out = tmp_path / "s.json"
        result = runner.invoke(
            cli.app,
            ["-q", "run", "-p", "F1", "--dim", "2", "--snakes", "3", "--iters", "2",
             "--runs", "1", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        assert json.loads(out.read_text())["base_seed"] == 21

    def test_run_budget_sets_iterations(self, tmp_path):
        out = tmp_path / "s.json"
        result = runner.invoke(
            cli.app,
            ["run", "-p", "clutch-brake", "--nfe", "1200", "--runs", "1", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        summary = json.loads(out.read_text())
        assert summary["config"]["T"] == 15
        assert summary["nfe_estimate"] == 1220
        assert "g8" in summary["best_constraints"]

    def test_run_unknown_problem(self):
        result = runner.invoke(cli.app, ["run", "-p", "F99", "--runs", "1"])
        assert result.exit_code == 1
        assert "✗" in result.stdout

    def test_run_invalid_parameter(self):
        result = runner.invoke(cli.app, ["run", "-p", "F1", "--rcl", "1.5", "--runs", "1"])
        assert result.exit_code == 1

    def test_sweep(self, tmp_path, monkeypatch):
        monkeypatch.setitem(harness.SWEEP_BASELINE, "T", 3)
        out = tmp_path / "sweep.csv"
        result = runner.invoke(
            cli.app,
            ["sweep", "-p", "F1", "--dim", "2", "--param", "n_snakes", "--values", "4,6",
             "--runs", "2", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(out, index_col=0)
        assert list(frame.columns) == ["4", "6"]
        assert frame.loc["NTM", "6"] == 18

    def test_sweep_unknown_parameter(self, tmp_path):
        result = runner.invoke(
            cli.app, ["sweep", "--param", "warp", "--out", str(tmp_path / "s.csv")]
        )
        assert result.exit_code == 1

    def test_oracle(self, tmp_path):
        out = tmp_path / "oracle.json"
        result = runner.invoke(cli.app, ["oracle", "--out", str(out)])
        assert result.exit_code == 0, result.output
        data = json.loads(out.read_text())
        assert data["best_f"] == pytest.approx(0.313657, abs=1e-6)
        assert data["grid_size"] == 21 * 21 * 5 * 41 * 8

    def test_oracle_unsupported_problem(self):
        result = runner.invoke(cli.app, ["oracle", "-p", "speed-reducer"])
        assert result.exit_code == 1

    def test_friedman(self, tmp_path):
        scores = tmp_path / "scores.csv"
        pd.DataFrame(
            {"A": [1.0, 1.0, 2.0], "B": [2.0, 3.0, 1.0], "C": [3.0, 2.0, 3.0]},
            index=["F1", "F2", "F3"],
        ).to_csv(scores)
        out = tmp_path / "ranks.csv"
        result = runner.invoke(cli.app, ["friedman", "-i", str(scores), "--out", str(out)])
        assert result.exit_code == 0, result.output
        ranks = pd.read_csv(out)
        assert list(ranks["algorithm"]) == ["A", "B", "C"]
        assert ranks["mean_rank"].tolist() == pytest.approx([4 / 3, 2.0, 8 / 3])
        assert ranks["ordinal_rank"].tolist() == [1, 2, 3]

    def test_friedman_missing_input(self, tmp_path):
        result = runner.invoke(cli.app, ["friedman", "-i", str(tmp_path / "none.csv")])
        assert result.exit_code == 1

    def test_config_set_and_show(self, isolated_config):
        result = runner.invoke(cli.app, ["config", "set", "snakes", "40"])
        assert result.exit_code == 0
        assert load_config(isolated_config).snakes == 40
        shown = runner.invoke(cli.app, ["config", "show"])
        assert "snakes" in shown.stdout
        assert "40" in shown.stdout

    def test_config_set_bad_key(self):
        result = runner.invoke(cli.app, ["config", "set", "warp", "1"])
        assert result.exit_code == 1


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
