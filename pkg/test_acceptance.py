#!/usr/bin/env python3
"""Reproductions of published results.

Most of these run full 30-run experiments and are marked slow; run them with
`pytest -m slow test_acceptance.py`.
"""

import numpy as np
import pytest

from slls.engineering import brute_force_clutch, make_engineering
from slls.formatter import export_trace, write_summary_json
from slls.harness import ExperimentConfig, run_experiment
from slls.optimizer import SllsConfig, iterations_for_budget
from slls.problems import make_problem, snap_discrete

CLUTCH_BEST = 0.313657


def experiment(problem_id, dim=None, n_runs=30, **changes):
    cfg = ExperimentConfig(problem_id, dim=dim, slls=SllsConfig(**changes), n_runs=n_runs)
    return run_experiment(cfg)


class TestPublishedDesigns:
    """Published solution vectors reproduce their objective and constraint values."""

    def test_robot_gripper(self):
        problem = make_engineering("robot_gripper")
        x = np.array([149.954, 119.441, 200.0, 27.535, 145.927, 158.477, 2.743])
        assert problem.raw(x) == pytest.approx(4.91124796, rel=1e-3)
        g = problem.constraint_values(x)
        expected = {
            "g1": 39.003, "g2": 10.997, "g3": 47.218, "g4": 2.782, "g5": 46700.191,
            "g6": 4139.838, "g7": 58.477, "g8": 34.123, "g9": 130.339, "g10": 108.543,
        }
        for name, value in expected.items():
            assert g[name] == pytest.approx(value, rel=1e-2), name

    def test_rolling_bearing(self):
        problem = make_engineering("rolling_bearing")
        x = np.array([125.719, 21.426, 10.749, 0.515, 0.515, 0.404, 0.7, 0.3, 0.02, 0.6])
        snapped = snap_discrete(problem.space, x)
        assert snapped[2] == 11.0
        assert problem.raw(snapped) == pytest.approx(81859.7415, rel=1e-3)
        g = problem.constraint_values(snapped)
        expected = {"g2": 14.576, "g3": 6.149, "g4": -3.426, "g5": 0.719, "g6": 4.281}
        for name, value in expected.items():
            assert g[name] == pytest.approx(value, rel=1e-2), name
        assert g["g8"] == pytest.approx(0.0, abs=1e-9)
        assert g["g9"] == pytest.approx(0.0, abs=1e-9)

    def test_thrust_bearing(self):
        problem = make_engineering("thrust_bearing")
        x = np.array([5.955, 5.389, 5.358e-6, 2.269])
        assert problem.raw(x) == pytest.approx(1625.443, rel=1e-2)
        g = problem.constraint_values(x)
        assert g["g4"] == pytest.approx(3.244e-4, rel=1e-2)
        assert g["g5"] == pytest.approx(0.567, rel=1e-2)
        assert g["g6"] == pytest.approx(8.334e-4, rel=1e-2)
        assert g["g3"] == pytest.approx(0.0, abs=0.02)
        # R and R0 moved by half a unit in their last printed digit
        nudged = problem.constraint_values(np.array([5.9555, 5.3885, 5.358e-6, 2.269]))
        for name in ("g1", "g2", "g7"):
            assert g[name] * nudged[name] < 0, name

    def test_belleville(self):
        problem = make_engineering("belleville")
        x = np.array([0.204, 0.2, 10.025, 12.006])
        assert problem.raw(x) == pytest.approx(1.9807, rel=1e-2)
        g = problem.constraint_values(x)
        assert g["g3"] == pytest.approx(0.0, abs=1e-9)
        for name, value in {"g4": 1.596, "g5": 0.004, "g6": 1.981, "g7": 0.199}.items():
            assert g[name] == pytest.approx(value, rel=1e-2), name
        thinner = problem.constraint_values(np.array([0.2035, 0.2, 10.025, 12.006]))
        thicker = problem.constraint_values(np.array([0.2045, 0.2, 10.025, 12.006]))
        assert thinner["g1"] > 0 > thicker["g1"]
        assert thinner["g2"] < 0 < thicker["g2"]

    def test_step_cone(self):
        problem = make_engineering("step_cone")
        x = np.array([35.871, 49.357, 65.804, 78.903, 96.397])
        assert problem.raw(x) == pytest.approx(19.1331, rel=1e-2)
        g = problem.constraint_values(x)
        expected = {
            "g1": 0.989, "g2": 0.999, "g3": 1.009, "g4": 1.019,
            "g5": 705.658, "g6": 486.668, "g7": 216.927,
        }
        for name, value in expected.items():
            assert g[name] == pytest.approx(value, rel=1e-2), name
        for name in ("h1", "h2", "h3"):
            assert g[name] == pytest.approx(0.0, abs=1e-3), name
        assert abs(g["g8"]) <= 1e-3

    def test_speed_reducer(self):
        problem = make_engineering("speed_reducer")
        x = np.array([3.5, 0.7, 17.0, 7.3, 7.716, 3.351, 5.287])
        assert problem.raw(x) == pytest.approx(2994.5735, rel=1e-3)
        g = problem.constraint_values(x)
        expected = {
            "g1": -0.074, "g2": -0.198, "g3": -0.499, "g4": -0.905,
            "g7": -0.703, "g9": -0.583, "g10": -0.051,
        }
        for name, value in expected.items():
            assert g[name] == pytest.approx(value, rel=1e-2), name
        assert g["g8"] == pytest.approx(0.0, abs=1e-9)
        for name in ("g5", "g6", "g11"):
            assert -1e-3 <= g[name] <= 0.0, name


class TestDeterminism:
    """Identical settings and seed give byte-identical output files."""

    def test_summary_and_trace_bytes(self, tmp_path):
        paths = []
        for name in ("a", "b"):
            slls = SllsConfig(n_snakes=8, T=25)
            cfg = ExperimentConfig("F10", dim=4, slls=slls, n_runs=3, base_seed=11, trace=True)
            summary = run_experiment(cfg)
            problem = make_problem("F10", 4)
            summary_path = write_summary_json(
                summary, problem, slls, cfg.base_seed, tmp_path / f"{name}.json"
            )
            trace_path, trail_path = export_trace(summary.trace, tmp_path / f"{name}.csv", slls)
            paths.append((summary_path, trace_path, trail_path))
        for first, second in zip(*paths):
            assert first.read_bytes() == second.read_bytes()


@pytest.mark.slow
class TestPublishedRuns:
    """Full 30-run experiments against published figures."""

    def test_clutch_brake_matches_oracle(self):
        oracle = brute_force_clutch()
        assert oracle.best_f == pytest.approx(CLUTCH_BEST, abs=1e-6)
        summary = experiment("clutch_brake", n_snakes=20, T=15)
        hits = sum(abs(r.best_f - oracle.best_f) <= 1e-9 for r in summary.records)
        assert hits >= 25

    def test_sphere(self):
        summary = experiment("F1", dim=30)
        assert summary.mean <= 1e-15
        assert summary.best <= 1e-20

    @pytest.mark.parametrize("problem_id", ["F9", "F10"])
    def test_rastrigin_and_ackley(self, problem_id):
        assert experiment(problem_id, dim=30).mean <= 1e-8

    @pytest.mark.parametrize(
        "problem_id,optimum", [("F16", -1.0316285), ("F17", 0.397887), ("F18", 3.0)]
    )
    def test_fixed_dimension_suite(self, problem_id, optimum):
        summary = experiment(problem_id)
        hits = sum(abs(r.best_f - optimum) <= 1e-4 for r in summary.records)
        assert hits >= 28

    def test_weierstrass_benchmark_settings(self):
        assert experiment("weierstrass", dim=5, T=500).mean <= 1e-2

    def test_weierstrass_large_gamma(self):
        summary = experiment("weierstrass", dim=5, T=500, gamma=25.0)
        assert summary.ntm == 10000
        assert summary.mean <= 1e-8

    def test_speed_reducer(self):
        T = iterations_for_budget(32000, SllsConfig())
        summary = experiment("speed_reducer", T=T)
        assert summary.nfe <= 32000
        problem = make_engineering("speed_reducer")
        good = [
            r for r in summary.records
            if r.best_f <= 2996.0 and problem.is_feasible(r.best_x, tolerance=1e-6)
        ]
        assert len(good) >= 20


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
