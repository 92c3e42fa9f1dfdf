"""Output file writing for experiment summaries, sweeps, ranks and traces."""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np
import pandas as pd

from .core import ContractError
from .engineering import OracleResult
from .harness import ExperimentSummary, FriedmanResult, RunRecord, SweepTable
from .optimizer import SllsConfig, TraceRecord
from .problems import Problem

# Machine files carry full double precision.
FLOAT_FORMAT = "%.17g"


def _to_jsonable(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return [float(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, dict):
        return {k: _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    return value


def _record_dict(record: RunRecord) -> dict[str, Any]:
    # wall_time varies between identical runs, so it never reaches machine output.
    data = {k: v for k, v in dataclasses.asdict(record).items() if k not in ("wall_time", "error")}
    return _to_jsonable(data)


def summary_dict(
    summary: ExperimentSummary,
    problem: Problem,
    cfg: SllsConfig,
    base_seed: int,
) -> dict[str, Any]:
    best = summary.best_record
    data: dict[str, Any] = {
        "problem": problem.descriptor(),
        "config": dataclasses.asdict(cfg),
        "n_runs": len(summary.records),
        "base_seed": base_seed,
        "mean": summary.mean,
        "std": summary.std,
        "best": summary.best,
        "worst": summary.worst,
        "nfe": summary.nfe,
        "nfe_estimate": summary.nfe_estimate,
        "ntm": summary.ntm,
        "best_x": best.best_x,
        "best_feasible": best.feasible,
        "best_constraints": best.constraint_values,
        "runs": [_record_dict(r) for r in summary.records],
    }
    data["config"].pop("seed", None)
    return _to_jsonable(data)


def write_summary_json(
    summary: ExperimentSummary, problem: Problem, cfg: SllsConfig, base_seed: int, path: Path
) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(summary_dict(summary, problem, cfg, base_seed), f, indent=2)
        f.write("\n")
    return path


def runs_frame(summary: ExperimentSummary) -> pd.DataFrame:
    rows = []
    for r in summary.records:
        row: dict[str, Any] = {
            "run": r.run_index,
            "seed": r.seed,
            "best_f": r.best_f,
            "nfe": r.nfe,
            "ntm": r.ntm,
            "iterations": r.iterations,
            "terminated_by": r.terminated_by,
            "feasible": "" if r.feasible is None else r.feasible,
            "serpentine_moves": r.serpentine_moves,
            "caterpillar_moves": r.caterpillar_moves,
            "degenerate_moves": r.degenerate_moves,
            "self_targets": r.self_targets,
        }
        if r.best_x is not None:
            row.update({f"x_{k + 1}": float(v) for k, v in enumerate(r.best_x)})
        rows.append(row)
    return pd.DataFrame(rows)


def write_runs_csv(summary: ExperimentSummary, path: Path) -> Path:
    path = Path(path)
    runs_frame(summary).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def write_sweep_csv(table: SweepTable, path: Path) -> Path:
    path = Path(path)
    table.to_frame().to_csv(path, float_format=FLOAT_FORMAT)
    return path


def read_scores_csv(path: Path) -> pd.DataFrame:
    """Score matrix with problems as the index (first column) and algorithms as columns."""
    return pd.read_csv(Path(path), index_col=0)


def ranks_frame(result: FriedmanResult, algorithms: Sequence[str]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "algorithm": list(algorithms),
            "mean_rank": result.mean_ranks,
            "ordinal_rank": result.ordinal_ranks,
        }
    )


def write_ranks_csv(result: FriedmanResult, algorithms: Sequence[str], path: Path) -> Path:
    path = Path(path)
    ranks_frame(result, algorithms).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def write_oracle_json(result: OracleResult, path: Path) -> Path:
    path = Path(path)
    data = {
        "problem": "clutch_brake",
        "best_x": result.best_x,
        "best_f": result.best_f,
        "feasible": result.feasible,
        "grid_size": result.grid_size,
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(_to_jsonable(data), f, indent=2)
        f.write("\n")
    return path


def trail_path_for(path: Path) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}.trail.csv")


def trace_frame(trace: Sequence[TraceRecord], cfg: SllsConfig) -> pd.DataFrame:
    """
    One row per iteration.

    Columns are t, P, LA, mode_1..mode_nS, f_<snake>_<point> for every touch-point
    slot, and vs_1..vs_<capacity>. A snake that moved with fewer points than the
    widest move (or not at all) leaves its remaining slots blank, as does a visible
    list that is not yet full.
    """
    n_snakes = cfg.n_snakes
    n_pts = max(2 * cfg.n_half_circles, cfg.n_touch_points)
    capacity = cfg.visible_capacity
    columns = (
        ["t", "P", "LA"]
        + [f"mode_{i + 1}" for i in range(n_snakes)]
        + [f"f_{i + 1}_{j + 1}" for i in range(n_snakes) for j in range(n_pts)]
        + [f"vs_{k + 1}" for k in range(capacity)]
    )
    rows = []
    for record in trace:
        touch = np.full((n_snakes, n_pts), np.nan)
        for i, values in enumerate(record.touch_values):
            touch[i, : len(values)] = values
        visible = np.full(capacity, np.nan)
        visible[: len(record.visible_values)] = record.visible_values
        rows.append([record.t, record.p, record.la, *record.modes, *touch.ravel(), *visible])
    frame = pd.DataFrame(rows, columns=columns)
    int_columns = ["t"] + [f"mode_{i + 1}" for i in range(n_snakes)]
    return frame.astype({c: int for c in int_columns})


def trail_frame(trace: Sequence[TraceRecord]) -> pd.DataFrame:
    rows = []
    for record in trace:
        for snake, (points, values) in enumerate(zip(record.touch_points, record.touch_values)):
            for j, (x, f) in enumerate(zip(points, values)):
                rows.append([record.t, snake + 1, j + 1, *x, f])
    dim = len(rows[0]) - 4 if rows else 0
    columns = ["t", "snake", "point_index"] + [f"x_{k + 1}" for k in range(dim)] + ["f"]
    return pd.DataFrame(rows, columns=columns)


def export_trace(
    trace: Sequence[TraceRecord], path: Path, cfg: SllsConfig, trail: Optional[Path] = None
) -> list[Path]:
    """Write the per-iteration trace and, next to it, the per-snake trail of touch points."""
    if not trace:
        raise ContractError("cannot export an empty trace")
    path = Path(path)
    trail = Path(trail) if trail else trail_path_for(path)
    trace_frame(trace, cfg).to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="")
    trail_frame(trace).to_csv(trail, index=False, float_format=FLOAT_FORMAT)
    return [path, trail]
