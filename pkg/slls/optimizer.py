"""The swarm driver: initialization, per-iteration movement, termination and accounting."""

from __future__ import annotations

import dataclasses
import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .core import ContractError, DegenerateMoveError, Rng, Spot, make_rng, sample_uniform
from .locomotion import caterpillar, serpentine
from .memory import DEFAULT_SELECTION_EPSILON, VisibleList, seed_initial
from .problems import Problem, snap_discrete
from .schedule import Mode, Schedule, amplitude, choose_mode, initial_amplitude, learning_efficiency

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SllsConfig:
    n_snakes: int = 20
    T: int = 1000
    gamma: float = 6.0
    n_half_circles: int = 2
    n_touch_points: int = 4
    r_cl: float = 0.5
    visible_capacity: int = 5
    la_min: float = 1e-30
    delta_f: float = 0.0
    seed: int = 0
    la0: Optional[float] = None
    selection_epsilon: float = DEFAULT_SELECTION_EPSILON

    def __post_init__(self) -> None:
        for name in ("n_snakes", "T", "n_half_circles", "n_touch_points", "visible_capacity"):
            if getattr(self, name) < 1:
                raise ContractError(f"{name} must be >= 1, got {getattr(self, name)}")
        if not 0.0 < self.r_cl < 1.0:
            raise ContractError(f"r_cl must lie in (0, 1), got {self.r_cl}")
        if self.gamma <= 0:
            raise ContractError(f"gamma must be positive, got {self.gamma}")
        if self.delta_f < 0:
            raise ContractError(f"delta_f must be non-negative, got {self.delta_f}")
        if self.la0 is not None and self.la0 <= 0:
            raise ContractError(f"la0 must be positive, got {self.la0}")
        if self.selection_epsilon <= 0:
            raise ContractError("selection_epsilon must be positive")

    def replace(self, **changes) -> SllsConfig:
        return dataclasses.replace(self, **changes)


class Termination(str, Enum):
    MAX_ITERATIONS = "MaxIterations"
    CONVERGED = "Converged"


@dataclass
class TraceRecord:
    """What happened during one iteration."""

    t: int
    p: float
    la: float
    modes: list[int]
    touch_values: list[list[float]]
    touch_points: list[np.ndarray]
    visible_values: list[float]

    @property
    def touch_count(self) -> int:
        return sum(len(values) for values in self.touch_values)


@dataclass
class SwarmState:
    positions: list[np.ndarray]
    visible: VisibleList
    schedule: Schedule
    rng: Rng
    t: int = 1
    nfe: int = 0
    ntm: int = 0
    serpentine_moves: int = 0
    caterpillar_moves: int = 0
    degenerate_moves: int = 0
    self_targets: int = 0
    trajectory: list[float] = field(default_factory=list)
    last_record: Optional[TraceRecord] = None


@dataclass
class RunResult:
    best: Spot
    nfe: int
    ntm: int
    iterations_completed: int
    terminated_by: Termination
    wall_time: float
    serpentine_moves: int = 0
    caterpillar_moves: int = 0
    degenerate_moves: int = 0
    self_targets: int = 0
    trajectory: list[float] = field(default_factory=list)


TraceSink = Callable[[TraceRecord], None]


def _evaluate(problem: Problem, x: np.ndarray, rng: Rng) -> Spot:
    x = snap_discrete(problem.space, x)
    return Spot(x=x, f=problem.evaluate(x, rng))


def init(cfg: SllsConfig, problem: Problem) -> SwarmState:
    """Sample and evaluate the swarm, then seed the visible list with the best spots."""
    space = problem.space
    rng = make_rng(cfg.seed)
    spots = [_evaluate(problem, sample_uniform(space, rng), rng) for _ in range(cfg.n_snakes)]
    la0 = cfg.la0 if cfg.la0 is not None else initial_amplitude(space)
    # A zero-width box has la0 = 0; the floor may not exceed it.
    schedule = Schedule(T=cfg.T, gamma=cfg.gamma, la0=la0, la_min=min(cfg.la_min, la0))
    return SwarmState(
        positions=[spot.x for spot in spots],
        visible=seed_initial(spots, cfg.visible_capacity),
        schedule=schedule,
        rng=rng,
        nfe=cfg.n_snakes,
    )


def step(state: SwarmState, cfg: SllsConfig, problem: Problem) -> SwarmState:
    """Move every snake once, in index order, updating the visible list as spots appear."""
    if state.t > cfg.T:
        raise ContractError(f"iteration {state.t} is past T={cfg.T}")

    t = state.t
    rng = state.rng
    p = learning_efficiency(t, state.schedule)
    la = amplitude(t, state.schedule)
    modes: list[int] = []
    touch_values: list[list[float]] = []
    touch_points: list[np.ndarray] = []

    for i, position in enumerate(state.positions):
        mode = choose_mode(t, state.schedule, rng)
        modes.append(int(mode))
        try:
            if mode is Mode.SERPENTINE:
                if la <= 0.0:
                    raise DegenerateMoveError(f"amplitude underflowed to {la}")
                move = serpentine(position, problem.space, la, cfg.n_half_circles, rng)
            else:
                target = state.visible.select_target(rng, cfg.selection_epsilon)
                if np.array_equal(target.x, position):
                    state.self_targets += 1
                    logger.debug("snake %d targeted its own position at t=%d", i, t)
                move = caterpillar(
                    position, target.x, cfg.r_cl, cfg.n_touch_points, problem.space
                )
        except DegenerateMoveError as e:
            state.degenerate_moves += 1
            logger.debug("snake %d stays put at t=%d: %s", i, t, e)
            touch_values.append([])
            touch_points.append(np.empty((0, problem.dim)))
            continue

        spots = [_evaluate(problem, x, rng) for x in move.touch_points]
        for spot in spots:
            state.visible.insert(spot)
        state.nfe += len(spots)
        state.positions[i] = spots[-1].x
        if mode is Mode.SERPENTINE:
            state.serpentine_moves += 1
        else:
            state.caterpillar_moves += 1
        touch_values.append([float(spot.f) for spot in spots])
        touch_points.append(np.array([spot.x for spot in spots]))

    state.ntm += cfg.n_snakes
    state.trajectory.append(float(state.visible.best.f))
    state.last_record = TraceRecord(
        t=t,
        p=p,
        la=la,
        modes=modes,
        touch_values=touch_values,
        touch_points=touch_points,
        visible_values=state.visible.values,
    )
    state.t += 1
    return state


def run(
    cfg: SllsConfig, problem: Problem, trace_sink: Optional[TraceSink] = None
) -> RunResult:
    """Iterate until T is exhausted or the visible spread drops below delta_f."""
    started = time.perf_counter()
    logger.debug("run start: %s seed=%d T=%d", problem.name, cfg.seed, cfg.T)

    state = init(cfg, problem)
    terminated_by = Termination.MAX_ITERATIONS
    while state.t <= cfg.T:
        step(state, cfg, problem)
        if trace_sink is not None and state.last_record is not None:
            trace_sink(state.last_record)
        if cfg.delta_f > 0 and state.visible.spread < cfg.delta_f:
            terminated_by = Termination.CONVERGED
            break

    if state.degenerate_moves:
        logger.warning(
            "%s seed=%d: %d degenerate moves skipped",
            problem.name,
            cfg.seed,
            state.degenerate_moves,
        )

    elapsed = time.perf_counter() - started
    best = state.visible.best
    logger.debug(
        "run done: %s seed=%d best=%.6g nfe=%d in %.2fs", problem.name, cfg.seed, best.f,
        state.nfe, elapsed,
    )
    return RunResult(
        best=Spot(x=np.array(best.x), f=best.f),
        nfe=state.nfe,
        ntm=state.ntm,
        iterations_completed=state.t - 1,
        terminated_by=terminated_by,
        wall_time=elapsed,
        serpentine_moves=state.serpentine_moves,
        caterpillar_moves=state.caterpillar_moves,
        degenerate_moves=state.degenerate_moves,
        self_targets=state.self_targets,
        trajectory=state.trajectory,
    )


def nfe_estimate(cfg: SllsConfig) -> int:
    """Expected evaluations of a full run, initialization included."""
    serpentine_points = 2 * cfg.n_half_circles
    if cfg.n_touch_points == serpentine_points:
        return cfg.n_snakes * cfg.T * cfg.n_touch_points + cfg.n_snakes
    moves = cfg.n_snakes * cfg.T * (cfg.n_touch_points + serpentine_points) / 2.0
    return int(np.floor(moves + 0.5)) + cfg.n_snakes


def iterations_for_budget(nfe: int, cfg: SllsConfig) -> int:
    """Largest sensible T so that a run spends about `nfe` evaluations."""
    per_move = (cfg.n_touch_points + 2 * cfg.n_half_circles) / 2.0
    return max(1, int(round((nfe - cfg.n_snakes) / (cfg.n_snakes * per_move))))
