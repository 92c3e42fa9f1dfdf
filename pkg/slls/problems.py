"""Problem type, penalty handling, discrete snapping and the problem catalog."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .core import ContractError, ProblemError, Rng, SearchSpace

GREATER_EQUAL = ">="
LESS_EQUAL = "<="


@dataclass(frozen=True)
class PenaltyPolicy:
    rho: float = 1e6
    eq_tolerance: float = 1e-4

    def __post_init__(self) -> None:
        if self.rho <= 0:
            raise ContractError(f"rho must be positive, got {self.rho}")
        if self.eq_tolerance < 0:
            raise ContractError(f"eq_tolerance must be non-negative, got {self.eq_tolerance}")


@dataclass(frozen=True)
class Constraint:
    """An inequality g(x) >= 0 or g(x) <= 0, kept in its printed sign convention."""

    name: str
    fn: Callable[[np.ndarray], float]
    sense: str = GREATER_EQUAL

    def value(self, x: np.ndarray) -> float:
        return float(self.fn(x))

    def violation(self, x: np.ndarray) -> float:
        v = self.value(x)
        if math.isnan(v):
            return math.inf
        return max(0.0, -v) if self.sense == GREATER_EQUAL else max(0.0, v)


def penalize(
    raw: float,
    violations_g: Sequence[float],
    violations_h: Sequence[float],
    policy: PenaltyPolicy = PenaltyPolicy(),
) -> float:
    """raw + rho * (sum of inequality breaches + equality breaches beyond tolerance)."""
    charge = math.fsum(violations_g)
    charge += math.fsum(max(0.0, abs(h) - policy.eq_tolerance) for h in violations_h)
    if charge == 0.0:
        return raw
    return raw + policy.rho * charge


def snap_discrete(space: SearchSpace, p: np.ndarray) -> np.ndarray:
    """Replace each discrete coordinate by its nearest allowed value (ties go lower)."""
    if not space.has_discrete:
        return np.asarray(p, dtype=float)
    snapped = np.array(p, dtype=float)
    for k, allowed in enumerate(space.discrete_sets):
        if allowed is None:
            continue
        upper = int(np.searchsorted(allowed, snapped[k], side="left"))
        if upper == 0:
            snapped[k] = allowed[0]
        elif upper == len(allowed):
            snapped[k] = allowed[-1]
        else:
            below, above = allowed[upper - 1], allowed[upper]
            snapped[k] = below if snapped[k] - below <= above - snapped[k] else above
    return snapped


@dataclass
class Problem:
    name: str
    space: SearchSpace
    raw_objective: Callable[[np.ndarray], float]
    inequalities: tuple[Constraint, ...] = ()
    equalities: tuple[Constraint, ...] = ()
    known_best: Optional[float] = None
    maximize: bool = False
    policy: PenaltyPolicy = field(default_factory=PenaltyPolicy)
    noise: bool = False
    extra_violation: Optional[Callable[[np.ndarray], float]] = None
    reference_nfe: Optional[int] = None
    description: str = ""

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def constrained(self) -> bool:
        return bool(self.inequalities or self.equalities or self.extra_violation)

    def raw(self, x: np.ndarray) -> float:
        """Objective in its natural orientation (maximized problems stay positive)."""
        return float(self.raw_objective(np.asarray(x, dtype=float)))

    def violations(self, x: np.ndarray) -> tuple[list[float], list[float]]:
        x = np.asarray(x, dtype=float)
        g = [c.violation(x) for c in self.inequalities]
        if self.extra_violation is not None:
            g.append(float(self.extra_violation(x)))
        h = [c.value(x) for c in self.equalities]
        return g, h

    def constraint_values(self, x: np.ndarray) -> dict[str, float]:
        x = np.asarray(x, dtype=float)
        return {c.name: c.value(x) for c in (*self.equalities, *self.inequalities)}

    def is_feasible(self, x: np.ndarray, tolerance: float = 0.0) -> bool:
        g, h = self.violations(x)
        return all(v <= tolerance for v in g) and all(
            abs(v) <= self.policy.eq_tolerance + tolerance for v in h
        )

    def evaluate(self, x: np.ndarray, rng: Optional[Rng] = None) -> float:
        """Penalized value minimized at the snapped point; maximized objectives are negated."""
        x = snap_discrete(self.space, x)
        raw = self.raw(x)
        if self.noise and rng is not None:
            raw += float(rng.random())
        objective = -raw if self.maximize else raw
        if self.constrained:
            g, h = self.violations(x)
            objective = penalize(objective, g, h, self.policy)
        if math.isnan(objective):
            raise ProblemError(f"{self.name} evaluated to NaN at {x.tolist()}")
        return objective

    def report(self, value: float) -> float:
        """Convert a minimized value back to the problem's orientation."""
        return -value if self.maximize else value

    def descriptor(self) -> dict[str, Any]:
        lower, upper = self.space.lower, self.space.upper
        uniform = bool(np.all(lower == lower[0]) and np.all(upper == upper[0]))
        return {
            "name": self.name,
            "dim": self.dim,
            "bounds": [float(lower[0]), float(upper[0])] if uniform
            else [[float(a), float(b)] for a, b in zip(lower, upper)],
            "constraints": len(self.inequalities) + len(self.equalities),
            "known_best": self.known_best,
            "maximize": self.maximize,
            "discrete": self.space.has_discrete,
            "reference_nfe": self.reference_nfe,
            "description": self.description,
        }


def normalize_id(problem_id: str) -> str:
    return problem_id.strip().lower().replace("-", "_")


def list_problems(dim: int = 30) -> list[Problem]:
    """Every problem in the catalog; scalable benchmarks use `dim`."""
    from .benchmarks import (
        BENCHMARK_IDS,
        COMPOSITION_IDS,
        SCALABLE_IDS,
        make_benchmark,
        make_composition,
    )
    from .engineering import ENGINEERING_IDS, make_engineering

    problems = [
        make_benchmark(pid, dim if pid in SCALABLE_IDS and pid != "weierstrass" else None)
        for pid in BENCHMARK_IDS
    ]
    problems += [make_composition(pid) for pid in COMPOSITION_IDS]
    problems += [make_engineering(pid) for pid in ENGINEERING_IDS]
    return problems


def make_problem(
    problem_id: str, dim: Optional[int] = None, policy: Optional[PenaltyPolicy] = None
) -> Problem:
    """Look up any catalog problem by id (case and dash insensitive)."""
    from .benchmarks import (
        BENCHMARK_IDS,
        COMPOSITION_ALIASES,
        COMPOSITION_IDS,
        make_benchmark,
        make_composition,
    )
    from .engineering import ENGINEERING_IDS, make_engineering

    key = normalize_id(problem_id)
    if key.upper() in BENCHMARK_IDS or key == "weierstrass":
        pid = key.upper() if key != "weierstrass" else key
        return make_benchmark(pid, dim)
    if key.upper() in COMPOSITION_IDS or key.upper() in COMPOSITION_ALIASES:
        if dim not in (None, 10):
            raise ProblemError(f"{problem_id} is defined for dimension 10 only")
        return make_composition(COMPOSITION_ALIASES.get(key.upper(), key.upper()))
    if key in ENGINEERING_IDS:
        problem = make_engineering(key)
        if dim not in (None, problem.dim):
            raise ProblemError(f"{problem_id} has fixed dimension {problem.dim}")
        if policy is not None:
            problem.policy = policy
        return problem
    raise ProblemError(f"Unknown problem id: {problem_id}")
