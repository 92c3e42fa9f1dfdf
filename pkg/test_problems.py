#!/usr/bin/env python3
"""Unit tests for the problem catalog, penalty handling and discrete snapping."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slls.benchmarks import (
    BENCHMARK_IDS,
    COMPOSITION_IDS,
    KNOWN_OPTIMA,
    SCALABLE_IDS,
    composition_optima,
    make_benchmark,
    make_composition,
)
from slls.core import ProblemError, SearchSpace, make_rng
from slls.engineering import (
    CLUTCH_SETS,
    ENGINEERING_IDS,
    belleville_f_of_a,
    brute_force_clutch,
    clutch_terms,
    make_engineering,
)
from slls.problems import (
    GREATER_EQUAL,
    LESS_EQUAL,
    Constraint,
    PenaltyPolicy,
    Problem,
    list_problems,
    make_problem,
    penalize,
    snap_discrete,
)

# Tolerances reflect how many digits the published minimizers carry.
OPTIMUM_TOLERANCE = {
    "F14": 1e-4,
    "F15": 1e-6,
    "F19": 1e-4,
    "F20": 1e-3,
    "F21": 1e-3,
    "F22": 1e-3,
    "F23": 1e-3,
}


class TestBenchmarkOptima:
    """Every benchmark reaches its known best value at its known minimizer."""

    @pytest.mark.parametrize("problem_id", BENCHMARK_IDS)
    def test_known_optimum(self, problem_id):
        problem = make_benchmark(problem_id, noise=False)
        x = KNOWN_OPTIMA[problem_id](problem.dim)
        tolerance = OPTIMUM_TOLERANCE.get(problem_id, 1e-8)
        assert problem.evaluate(x) == pytest.approx(problem.known_best, abs=tolerance)

    def test_schwefel_optimum_scales_with_dimension(self):
        problem = make_benchmark("F8", 30)
        assert problem.known_best == pytest.approx(-12569.487, abs=1e-3)
        x = KNOWN_OPTIMA["F8"](30)
        assert problem.evaluate(x) == pytest.approx(-12569.487, abs=1e-3)

    @pytest.mark.parametrize("problem_id", ["F1", "F5", "F9", "F10", "weierstrass"])
    def test_optimum_beats_random_points(self, problem_id):
        problem = make_benchmark(problem_id, 10)
        best = problem.evaluate(KNOWN_OPTIMA[problem_id](10))
        rng = make_rng(0)
        for _ in range(20):
            x = rng.uniform(problem.space.lower, problem.space.upper)
            assert problem.evaluate(x) >= best

    def test_noise_off_quartic_zero_at_origin(self):
        problem = make_benchmark("F7", 30, noise=False)
        assert problem.evaluate(np.zeros(30), make_rng(0)) == 0.0

    def test_noisy_quartic_in_unit_interval_at_origin(self):
        problem = make_benchmark("F7", 30)
        rng = make_rng(0)
        values = [problem.evaluate(np.zeros(30), rng) for _ in range(50)]
        assert all(0.0 <= v < 1.0 for v in values)
        assert len(set(values)) > 1

    def test_noise_needs_rng(self):
        problem = make_benchmark("F7", 30)
        assert problem.evaluate(np.zeros(30)) == 0.0

    def test_default_dimensions(self):
        assert make_benchmark("F1").dim == 30
        assert make_benchmark("weierstrass").dim == 5
        assert make_benchmark("F14").dim == 2
        assert make_benchmark("F20").dim == 6

    def test_fixed_dimension_rejects_other(self):
        with pytest.raises(ProblemError):
            make_benchmark("F14", 30)

    def test_rosenbrock_needs_two_dimensions(self):
        with pytest.raises(ProblemError):
            make_benchmark("F5", 1)

    def test_unknown_benchmark(self):
        with pytest.raises(ProblemError):
            make_benchmark("F99")

    def test_scalable_ids(self):
        assert "F13" in SCALABLE_IDS
        assert "F14" not in SCALABLE_IDS


class TestComposition:
    """Tests for the composition functions CF1-CF6."""

    @pytest.mark.parametrize("problem_id", COMPOSITION_IDS)
    def test_zero_at_first_optimum(self, problem_id):
        problem = make_composition(problem_id)
        assert problem.evaluate(composition_optima(problem_id)[0]) == pytest.approx(0.0, abs=1e-6)

    @pytest.mark.parametrize("problem_id", COMPOSITION_IDS)
    def test_positive_elsewhere(self, problem_id):
        problem = make_composition(problem_id)
        rng = make_rng(1)
        for _ in range(10):
            assert problem.evaluate(rng.uniform(-5, 5, 10)) > 0.0

    def test_optima_fixed_across_calls(self):
        assert np.array_equal(composition_optima("CF3"), composition_optima("CF3"))
        assert not np.array_equal(composition_optima("CF1"), composition_optima("CF2"))

    def test_optima_inside_box(self):
        optima = composition_optima("CF6")
        assert optima.shape == (10, 10)
        assert np.all(np.abs(optima) <= 5.0)

    def test_aliases(self):
        assert make_problem("F24").name == "CF1"
        assert make_problem("cf6").name == "CF6"

    def test_dimension_fixed_at_ten(self):
        assert make_problem("CF2", 10).dim == 10
        with pytest.raises(ProblemError):
            make_problem("CF2", 5)


class TestPenalty:
    """Tests for penalize() and Constraint violations."""

    def test_feasible_unchanged(self):
        assert penalize(3.5, [0.0, 0.0], []) == 3.5

    def test_inequality_charge(self):
        assert penalize(1.0, [0.5], [], PenaltyPolicy(rho=10.0)) == pytest.approx(6.0)

    def test_equality_within_tolerance(self):
        assert penalize(1.0, [], [5e-5], PenaltyPolicy(rho=10.0, eq_tolerance=1e-4)) == 1.0

    def test_equality_beyond_tolerance(self):
        policy = PenaltyPolicy(rho=10.0, eq_tolerance=1e-4)
        assert penalize(1.0, [], [-0.1], policy) == pytest.approx(1.0 + 10.0 * 0.0999)

    def test_invalid_policy(self):
        with pytest.raises(ValueError):
            PenaltyPolicy(rho=0.0)

    def test_greater_equal_violation(self):
        c = Constraint("g", lambda x: x[0] - 3.0, GREATER_EQUAL)
        assert c.violation(np.array([1.0])) == 2.0
        assert c.violation(np.array([4.0])) == 0.0

    def test_less_equal_violation(self):
        c = Constraint("g", lambda x: x[0] - 3.0, LESS_EQUAL)
        assert c.violation(np.array([6.0])) == 3.0
        assert c.violation(np.array([1.0])) == 0.0

    def test_nan_is_infinite_violation(self):
        c = Constraint("g", lambda x: float("nan"))
        assert math.isinf(c.violation(np.zeros(1)))

    def test_problem_penalizes_infeasible(self):
        problem = Problem(
            name="toy",
            space=SearchSpace.box(-10, 10, 1),
            raw_objective=lambda x: float(x[0] ** 2),
            inequalities=(Constraint("g1", lambda x: x[0] - 1.0),),
            policy=PenaltyPolicy(rho=100.0),
        )
        assert problem.evaluate(np.array([2.0])) == 4.0
        assert problem.evaluate(np.array([0.0])) == pytest.approx(100.0)
        assert problem.is_feasible(np.array([1.0]))
        assert not problem.is_feasible(np.array([0.5]))

    def test_nan_objective_raises(self):
        problem = Problem("nan", SearchSpace.box(0, 1, 1), lambda x: float("nan"))
        with pytest.raises(ProblemError):
            problem.evaluate(np.array([0.5]))

    def test_maximized_objective_negated(self):
        problem = Problem("max", SearchSpace.box(0, 1, 1), lambda x: 7.0, maximize=True)
        assert problem.evaluate(np.array([0.5])) == -7.0
        assert problem.report(-7.0) == 7.0


class TestSnapDiscrete:
    """Tests for snapping discrete coordinates to their allowed sets."""

    SPACE = SearchSpace(
        lower=[0.0, 0.0], upper=[3.0, 3.0], discrete_sets=([1.0, 1.5, 2.0], None)
    )

    def test_nearest_value(self):
        assert snap_discrete(self.SPACE, np.array([1.3, 0.77]))[0] == 1.5

    def test_tie_goes_lower(self):
        assert snap_discrete(self.SPACE, np.array([1.25, 0.0]))[0] == 1.0

    def test_outside_range(self):
        assert snap_discrete(self.SPACE, np.array([2.9, 0.0]))[0] == 2.0
        assert snap_discrete(self.SPACE, np.array([0.1, 0.0]))[0] == 1.0

    def test_continuous_untouched(self):
        assert snap_discrete(self.SPACE, np.array([1.3, 0.77]))[1] == 0.77

    def test_input_not_modified(self):
        p = np.array([1.3, 0.77])
        snap_discrete(self.SPACE, p)
        assert p[0] == 1.3

    @given(st.floats(0, 3), st.floats(0, 3))
    def test_idempotent(self, a, b):
        once = snap_discrete(self.SPACE, np.array([a, b]))
        assert np.array_equal(snap_discrete(self.SPACE, once), once)
        assert once[0] in (1.0, 1.5, 2.0)


class TestClutchBrake:
    """Tests for the clutch brake problem and its exhaustive oracle."""

    def test_published_design(self):
        terms = clutch_terms(70.0, 90.0, 1.0, 810.0, 3.0)
        assert terms["f"] == pytest.approx(0.313657, abs=1e-6)
        assert terms["g1"] == pytest.approx(0.0)
        assert terms["g3"] == pytest.approx(0.919, abs=1e-3)
        assert terms["g4"] == pytest.approx(9.830, abs=1e-3)
        assert terms["g5"] == pytest.approx(7.895, abs=1e-3)
        assert terms["g6"] == pytest.approx(0.702, abs=1e-3)
        assert terms["g7"] == pytest.approx(37.706, abs=1e-3)
        assert terms["g8"] == pytest.approx(14.298, abs=1e-3)

    def test_published_design_feasible(self):
        problem = make_engineering("clutch_brake")
        x = np.array([70.0, 90.0, 1.0, 810.0, 3.0])
        assert problem.is_feasible(x)
        assert problem.evaluate(x) == pytest.approx(0.313657, abs=1e-6)

    def test_evaluation_snaps(self):
        problem = make_engineering("clutch_brake")
        exact = problem.evaluate(np.array([70.0, 90.0, 1.0, 810.0, 3.0]))
        assert problem.evaluate(np.array([70.2, 89.9, 1.1, 812.0, 3.3])) == exact

    def test_oracle(self):
        result = brute_force_clutch()
        assert result.best_f == pytest.approx(0.313657, abs=1e-6)
        assert result.grid_size == 21 * 21 * 5 * 41 * 8
        assert list(result.best_x[[0, 1, 2, 4]]) == [70.0, 90.0, 1.0, 3.0]
        assert result.best_x[3] in CLUTCH_SETS[3]
        assert make_engineering("clutch_brake").is_feasible(result.best_x)


class TestEngineering:
    """Tests for the remaining engineering design problems."""

    @pytest.mark.parametrize("problem_id", ENGINEERING_IDS)
    def test_finite_at_box_center(self, problem_id):
        problem = make_engineering(problem_id)
        center = 0.5 * (problem.space.lower + problem.space.upper)
        assert math.isfinite(problem.evaluate(center))
        assert problem.constrained

    @pytest.mark.parametrize(
        "problem_id,dim,nfe",
        [
            ("clutch_brake", 5, 1200),
            ("robot_gripper", 7, 36000),
            ("rolling_bearing", 10, 16000),
            ("thrust_bearing", 4, 48000),
            ("belleville", 4, 24000),
            ("step_cone", 5, 72000),
            ("speed_reducer", 7, 32000),
        ],
    )
    def test_shape(self, problem_id, dim, nfe):
        problem = make_engineering(problem_id)
        assert problem.dim == dim
        assert problem.reference_nfe == nfe

    def test_speed_reducer_published_design(self):
        problem = make_engineering("speed_reducer")
        x = np.array([3.5, 0.7, 17.0, 7.3, 7.71532, 3.35021, 5.28665])
        assert problem.raw(x) == pytest.approx(2994.47, rel=1e-3)
        assert problem.is_feasible(x, tolerance=1e-3)

    def test_bearing_is_maximized(self):
        problem = make_engineering("rolling_bearing")
        assert problem.maximize
        assert problem.space.discrete_sets[2] is not None
        center = 0.5 * (problem.space.lower + problem.space.upper)
        assert problem.raw(center) > 0

    def test_step_cone_has_equalities(self):
        problem = make_engineering("step_cone")
        assert [c.name for c in problem.equalities] == ["h1", "h2", "h3"]
        assert len(problem.inequalities) == 8

    @pytest.mark.parametrize(
        "a,expected", [(1.0, 1.0), (1.62, 0.77), (2.04, 0.6), (2.68, 0.51), (3.0, 0.5)]
    )
    def test_belleville_lookup(self, a, expected):
        assert belleville_f_of_a(a) == expected

    def test_unknown_problem(self):
        with pytest.raises(ProblemError):
            make_engineering("warp_drive")


class TestCatalog:
    """Tests for make_problem() and list_problems()."""

    def test_every_problem_listed(self):
        problems = list_problems(30)
        assert len(problems) == len(BENCHMARK_IDS) + len(COMPOSITION_IDS) + len(ENGINEERING_IDS)
        assert {p.name for p in problems} >= {"F1", "CF1", "speed_reducer", "weierstrass"}

    def test_listed_dimensions(self):
        by_name = {p.name: p for p in list_problems(10)}
        assert by_name["F1"].dim == 10
        assert by_name["F14"].dim == 2
        assert by_name["weierstrass"].dim == 5

    @pytest.mark.parametrize(
        "problem_id,name",
        [
            ("f1", "F1"),
            ("Weierstrass", "weierstrass"),
            ("speed-reducer", "speed_reducer"),
            ("Clutch-Brake", "clutch_brake"),
        ],
    )
    def test_lookup_is_forgiving(self, problem_id, name):
        assert make_problem(problem_id).name == name

    def test_engineering_fixed_dimension(self):
        with pytest.raises(ProblemError):
            make_problem("speed_reducer", 30)

    def test_policy_applied(self):
        policy = PenaltyPolicy(rho=5.0)
        assert make_problem("belleville", policy=policy).policy is policy

    def test_unknown(self):
        with pytest.raises(ProblemError):
            make_problem("nope")

    def test_descriptor(self):
        d = make_problem("F1", 3).descriptor()
        assert d["dim"] == 3
        assert d["bounds"] == [-100.0, 100.0]
        assert d["constraints"] == 0
        per_dim = make_problem("speed_reducer").descriptor()["bounds"]
        assert per_dim[0] == [2.6, 3.6]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
