"""Seeded multi-run experiments, sensitivity sweeps and Friedman mean ranks."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.stats import friedmanchisquare, rankdata

from .core import ContractError, ExperimentError, SllsError
from .optimizer import RunResult, SllsConfig, TraceRecord, nfe_estimate, run
from .problems import PenaltyPolicy, Problem, make_problem

logger = logging.getLogger(__name__)

# Settings every sensitivity sweep starts from before the swept knob is changed.
SWEEP_BASELINE = dict(
    n_snakes=20, gamma=6.0, T=500, visible_capacity=5, n_half_circles=2, n_touch_points=4, r_cl=0.5
)

SWEEP_GRIDS: dict[str, list[float]] = {
    "n_snakes": list(range(10, 101, 10)),
    "gamma": list(range(5, 51, 5)),
    "T": list(range(100, 1001, 100)),
    "visible_capacity": list(range(3, 13)),
    "n_half_circles": list(range(1, 11)),
    "n_touch_points": list(range(3, 13)),
    "r_cl": [0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
}

SWEEP_PARAMS = tuple(SWEEP_GRIDS)
_INTEGER_PARAMS = {"n_snakes", "T", "visible_capacity", "n_half_circles", "n_touch_points"}

# la_min values crossed with the n_half_circles sweep.
LA_MIN_CROSS = (1e-30, 1e-15, 1e-3)

SUMMARY_ROWS = ("Mean", "Std", "Best", "Worst", "NTM")


@dataclass
class ExperimentConfig:
    problem_id: str
    dim: Optional[int] = None
    slls: SllsConfig = field(default_factory=SllsConfig)
    n_runs: int = 30
    base_seed: int = 0
    workers: int = 1
    policy: Optional[PenaltyPolicy] = None
    trace: bool = False
    summary_path: Optional[Path] = None
    runs_path: Optional[Path] = None
    trace_path: Optional[Path] = None

    def __post_init__(self) -> None:
        if self.n_runs < 1:
            raise ContractError(f"n_runs must be >= 1, got {self.n_runs}")
        if self.workers < 1:
            raise ContractError(f"workers must be >= 1, got {self.workers}")

    def seed_for(self, run_index: int) -> int:
        return self.base_seed + run_index


@dataclass
class RunRecord:
    run_index: int
    seed: int
    best_f: Optional[float] = None
    best_x: Optional[np.ndarray] = None
    nfe: int = 0
    ntm: int = 0
    iterations: int = 0
    terminated_by: str = ""
    feasible: Optional[bool] = None
    constraint_values: dict[str, float] = field(default_factory=dict)
    serpentine_moves: int = 0
    caterpillar_moves: int = 0
    degenerate_moves: int = 0
    self_targets: int = 0
    wall_time: float = 0.0
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class ExperimentSummary:
    """Per-run best values aggregated in the problem's own orientation."""

    problem: str
    maximize: bool
    mean: float
    std: float
    best: float
    worst: float
    nfe: int
    nfe_estimate: int
    ntm: int
    records: list[RunRecord]
    trace: list[TraceRecord] = field(default_factory=list)

    @property
    def best_record(self) -> RunRecord:
        values = [r.best_f for r in self.records]
        index = int(np.argmax(values) if self.maximize else np.argmin(values))
        return self.records[index]

    def row(self) -> dict[str, float]:
        return dict(zip(SUMMARY_ROWS, (self.mean, self.std, self.best, self.worst, self.ntm)))


def _record_from(index: int, seed: int, problem: Problem, result: RunResult) -> RunRecord:
    x = result.best.x
    return RunRecord(
        run_index=index,
        seed=seed,
        best_f=problem.report(float(result.best.f)),
        best_x=np.array(x),
        nfe=result.nfe,
        ntm=result.ntm,
        iterations=result.iterations_completed,
        terminated_by=result.terminated_by.value,
        feasible=problem.is_feasible(x) if problem.constrained else None,
        constraint_values=problem.constraint_values(x),
        serpentine_moves=result.serpentine_moves,
        caterpillar_moves=result.caterpillar_moves,
        degenerate_moves=result.degenerate_moves,
        self_targets=result.self_targets,
        wall_time=result.wall_time,
    )


def _run_one(
    index: int, cfg: ExperimentConfig, problem: Problem, trace: Optional[list[TraceRecord]]
) -> RunRecord:
    seed = cfg.seed_for(index)
    try:
        sink = trace.append if trace is not None else None
        result = run(cfg.slls.replace(seed=seed), problem, sink)
    except SllsError as e:
        logger.error("run %d (seed %d) of %s failed: %s", index, seed, problem.name, e)
        return RunRecord(run_index=index, seed=seed, error=str(e))
    return _record_from(index, seed, problem, result)


def summarize(problem: Problem, cfg: SllsConfig, records: Sequence[RunRecord]) -> ExperimentSummary:
    values = np.array([r.best_f for r in records], dtype=float)
    std = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
    best, worst = (values.max(), values.min()) if problem.maximize else (values.min(), values.max())
    return ExperimentSummary(
        problem=problem.name,
        maximize=problem.maximize,
        mean=float(values.mean()),
        std=std,
        best=float(best),
        worst=float(worst),
        nfe=int(round(np.mean([r.nfe for r in records]))),
        nfe_estimate=nfe_estimate(cfg),
        ntm=cfg.n_snakes * cfg.T,
        records=list(records),
    )


def run_experiment(
    cfg: ExperimentConfig,
    on_run_done: Optional[Callable[[RunRecord], None]] = None,
) -> ExperimentSummary:
    """Run `n_runs` independent seeded runs and aggregate their best values."""
    problem = make_problem(cfg.problem_id, cfg.dim, cfg.policy)
    trace: Optional[list[TraceRecord]] = [] if cfg.trace else None
    logger.info(
        "%s: %d runs, seeds %d..%d", problem.name, cfg.n_runs, cfg.base_seed,
        cfg.seed_for(cfg.n_runs - 1),
    )

    records: list[RunRecord] = []
    if cfg.workers == 1:
        for index in range(cfg.n_runs):
            record = _run_one(index, cfg, problem, trace if index == 0 else None)
            records.append(record)
            if on_run_done:
                on_run_done(record)
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            futures = {
                pool.submit(_run_one, index, cfg, problem, trace if index == 0 else None): index
                for index in range(cfg.n_runs)
            }
            for future in as_completed(futures):
                record = future.result()
                records.append(record)
                if on_run_done:
                    on_run_done(record)
        records.sort(key=lambda r: r.run_index)

    failures = [r for r in records if not r.ok]
    if failures:
        raise ExperimentError(
            f"{len(failures)} of {cfg.n_runs} runs of {problem.name} failed", failures
        )

    summary = summarize(problem, cfg.slls, records)
    summary.trace = trace or []
    return summary


@dataclass
class SweepColumn:
    value: float
    la_min: Optional[float]
    summary: ExperimentSummary


@dataclass
class SweepTable:
    param: str
    columns: list[SweepColumn]

    def to_frame(self) -> pd.DataFrame:
        """Rows Mean/Std/Best/Worst/NTM, one column per swept value (and la_min block)."""
        data = {}
        for column in self.columns:
            label = _format_value(column.value)
            if column.la_min is not None:
                label = f"la_min={column.la_min:g}|{label}"
            data[label] = column.summary.row()
        frame = pd.DataFrame(data, index=list(SUMMARY_ROWS))
        frame.index.name = self.param
        return frame


def _format_value(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else f"{value:g}"


def sweep(
    cfg: ExperimentConfig,
    param: str,
    values: Optional[Sequence[float]] = None,
    la_min_values: Optional[Sequence[float]] = None,
    on_column_done: Optional[Callable[[SweepColumn], None]] = None,
) -> SweepTable:
    """
    One experiment per value of `param`, everything else at the sweep baseline.

    The n_half_circles sweep is crossed with la_min (1e-30, 1e-15, 1e-3 unless
    `la_min_values` says otherwise). Missing `values` fall back to the grid in
    SWEEP_GRIDS.
    """
    if param not in SWEEP_GRIDS:
        raise ContractError(
            f"Unknown sweep parameter '{param}'. Choose from: {', '.join(SWEEP_PARAMS)}"
        )
    values = list(values) if values else SWEEP_GRIDS[param]
    if param == "n_half_circles":
        la_mins: list[Optional[float]] = list(la_min_values or LA_MIN_CROSS)
    else:
        la_mins = [None]

    baseline = cfg.slls.replace(**SWEEP_BASELINE)
    columns: list[SweepColumn] = []
    for la_min in la_mins:
        for value in values:
            value = int(value) if param in _INTEGER_PARAMS else float(value)
            changes = {param: value}
            if la_min is not None:
                changes["la_min"] = la_min
            experiment = ExperimentConfig(
                problem_id=cfg.problem_id,
                dim=cfg.dim,
                slls=baseline.replace(**changes),
                n_runs=cfg.n_runs,
                base_seed=cfg.base_seed,
                workers=cfg.workers,
                policy=cfg.policy,
            )
            column = SweepColumn(value=value, la_min=la_min, summary=run_experiment(experiment))
            columns.append(column)
            if on_column_done:
                on_column_done(column)
    return SweepTable(param=param, columns=columns)


@dataclass
class FriedmanResult:
    ranks: np.ndarray  # (problems, algorithms)
    mean_ranks: np.ndarray
    ordinal_ranks: np.ndarray
    statistic: float
    pvalue: float


def _as_matrix(values: Sequence[Sequence[float]], name: str) -> np.ndarray:
    rows = [list(row) for row in values]
    if not rows or len({len(row) for row in rows}) != 1:
        raise ContractError(f"{name} must be a non-empty rectangular matrix")
    return np.asarray(rows, dtype=float)


def friedman_rank(
    values: Sequence[Sequence[float]],
    lower_is_better: bool = True,
    tiebreak: Optional[Sequence[Sequence[float]]] = None,
) -> FriedmanResult:
    """
    Rank algorithms (columns) within each problem (row) and average the ranks.

    Ties share the average of the ranks they span. When `tiebreak` is given (a
    matrix of the same shape, lower always better, e.g. standard deviations) it
    orders entries whose primary scores are equal before averaging.
    """
    scores = _as_matrix(values, "values")
    if scores.shape[1] < 2:
        raise ContractError("at least two algorithms are needed for ranking")
    key = scores if lower_is_better else -scores

    if tiebreak is not None:
        secondary = _as_matrix(tiebreak, "tiebreak")
        if secondary.shape != scores.shape:
            raise ContractError(
                f"tiebreak shape {secondary.shape} does not match values {scores.shape}"
            )
        k = scores.shape[1]
        primary = rankdata(key, method="dense", axis=1)
        key = primary * (k + 1) + rankdata(secondary, method="dense", axis=1)

    ranks = rankdata(key, method="average", axis=1)
    mean_ranks = ranks.mean(axis=0)
    ordinal = rankdata(mean_ranks, method="min").astype(int)

    statistic, pvalue = float("nan"), float("nan")
    if scores.shape[1] >= 3 and scores.shape[0] >= 2:
        with np.errstate(divide="ignore", invalid="ignore"):
            statistic, pvalue = friedmanchisquare(*key.T)
    return FriedmanResult(
        ranks=ranks,
        mean_ranks=mean_ranks,
        ordinal_ranks=ordinal,
        statistic=float(statistic),
        pvalue=float(pvalue),
    )
