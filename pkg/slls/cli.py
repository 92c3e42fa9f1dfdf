"""Typer CLI entry point for slls."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, NoReturn, Optional

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import BarColumn, Progress, TaskProgressColumn, TextColumn, TimeElapsedColumn
from rich.table import Table

from . import __version__
from .config import (
    SETTABLE_KEYS,
    Config,
    env_seed,
    get_config_path,
    load_config,
    load_run_config,
    set_config_value,
)
from .core import ExperimentError, SllsError
from .engineering import brute_force_clutch
from .formatter import (
    export_trace,
    read_scores_csv,
    write_oracle_json,
    write_ranks_csv,
    write_runs_csv,
    write_summary_json,
    write_sweep_csv,
)
from .harness import SWEEP_PARAMS, ExperimentConfig, friedman_rank, run_experiment, sweep
from .optimizer import SllsConfig, iterations_for_budget
from .problems import PenaltyPolicy, list_problems, make_problem, normalize_id
from .utils import ORACLE_PROBLEMS, format_bounds, format_number, format_vector, parse_values

app = typer.Typer(
    name="slls",
    help="Snake locomotion learning search: run, sweep and rank swarm optimization experiments.",
    add_completion=False,
    invoke_without_command=True,
)
config_app = typer.Typer(help="Manage persistent configuration.")
app.add_typer(config_app, name="config")

console = Console()


def _setup_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    root = logging.getLogger()
    for handler in list(root.handlers):
        if isinstance(handler, RichHandler):
            root.removeHandler(handler)
    root.addHandler(RichHandler(console=Console(stderr=True), show_path=False))
    root.setLevel(level)


@app.callback()
def _app_callback(
    ctx: typer.Context,
    version: bool = typer.Option(
        False, "--version", "-V", is_eager=True, help="Show version and exit."
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging."),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Warnings and errors only."),
) -> None:
    """slls: snake locomotion learning search."""
    if version:
        typer.echo(f"slls {__version__}")
        raise typer.Exit()
    _setup_logging(verbose, quiet)
    ctx.obj = {"quiet": quiet}
    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _resolve(cli_val, file_val, config_val, default):
    """Return the first value that is set: flag, config file, persistent config, default."""
    for value in (cli_val, file_val, config_val):
        if value is not None:
            return value
    return default


def _fail(message: str) -> NoReturn:
    typer.echo(f"✗ {message}")
    raise typer.Exit(1)


def _quiet(ctx: typer.Context) -> bool:
    return bool(ctx.obj and ctx.obj.get("quiet"))


def _read_run_file(path: Optional[Path]) -> dict[str, Any]:
    if path is None:
        return {}
    try:
        return load_run_config(path)
    except (OSError, ValueError) as e:
        _fail(f"Cannot read config file {path}: {e}")
    return {}


def _build_slls(
    flags: dict[str, Any], file: dict[str, Any], cfg: Config, seed: Optional[int]
) -> SllsConfig:
    """Resolve every optimizer knob: flag > config file > persistent config > built-in."""
    defaults = SllsConfig()
    return SllsConfig(
        n_snakes=int(_resolve(flags["snakes"], file.get("snakes"), cfg.snakes, defaults.n_snakes)),
        T=int(_resolve(flags["iters"], file.get("iters"), cfg.iters, defaults.T)),
        gamma=float(_resolve(flags["gamma"], file.get("gamma"), cfg.gamma, defaults.gamma)),
        n_half_circles=int(
            _resolve(
                flags["half_circles"], file.get("half_circles"), cfg.half_circles,
                defaults.n_half_circles,
            )
        ),
        n_touch_points=int(
            _resolve(
                flags["touch_points"], file.get("touch_points"), cfg.touch_points,
                defaults.n_touch_points,
            )
        ),
        r_cl=float(_resolve(flags["rcl"], file.get("rcl"), cfg.rcl, defaults.r_cl)),
        visible_capacity=int(
            _resolve(flags["visible"], file.get("visible"), cfg.visible, defaults.visible_capacity)
        ),
        la_min=float(_resolve(flags["la_min"], file.get("la_min"), cfg.la_min, defaults.la_min)),
        delta_f=float(
            _resolve(flags["delta_f"], file.get("delta_f"), cfg.delta_f, defaults.delta_f)
        ),
        la0=_resolve(flags["la0"], file.get("la0"), None, None),
        selection_epsilon=float(
            _resolve(
                flags["selection_epsilon"], file.get("selection_epsilon"), cfg.selection_epsilon,
                defaults.selection_epsilon,
            )
        ),
        seed=int(seed or 0),
    )


def _resolve_seed(flag: Optional[int], file: dict[str, Any], cfg: Config) -> int:
    env = env_seed()
    if flag is not None:
        return flag
    if env is not None:
        return env
    return int(_resolve(None, file.get("seed"), cfg.seed, 0))


def _policy(file: dict[str, Any], cfg: Config) -> PenaltyPolicy:
    defaults = PenaltyPolicy()
    return PenaltyPolicy(
        rho=float(_resolve(None, file.get("rho"), cfg.penalty.rho, defaults.rho)),
        eq_tolerance=float(
            _resolve(
                None, file.get("eq_tolerance"), cfg.penalty.eq_tolerance, defaults.eq_tolerance
            )
        ),
    )


def _progress(quiet: bool) -> Progress:
    return Progress(
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TaskProgressColumn(),
        TimeElapsedColumn(),
        console=console,
        disable=quiet,
        transient=True,
    )


def _summary_table(title: str, rows: dict[str, float]) -> Table:
    table = Table(title=title)
    table.add_column("Statistic")
    table.add_column("Value", justify="right")
    for name, value in rows.items():
        table.add_row(name, format_number(value))
    return table


# ---------------------------------------------------------------------------
# list-problems
# ---------------------------------------------------------------------------

@app.command("list-problems")
def list_problems_cmd(
    dim: int = typer.Option(30, "--dim", help="Dimension used for scalable benchmarks."),
    as_json: bool = typer.Option(False, "--json", help="Print descriptors as JSON."),
) -> None:
    """List every benchmark and engineering problem."""
    try:
        descriptors = [p.descriptor() for p in list_problems(dim)]
    except SllsError as e:
        _fail(str(e))

    if as_json:
        typer.echo(json.dumps(descriptors, indent=2))
        return

    table = Table(title="Problems")
    for name in ("id", "dim", "bounds", "constraints", "known best", "description"):
        table.add_column(name)
    for d in descriptors:
        best = format_number(d["known_best"])
        if d["maximize"]:
            best += " (max)"
        table.add_row(
            d["name"], str(d["dim"]), format_bounds(d["bounds"]), str(d["constraints"]),
            best, d["description"],
        )
    console.print(table)


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------

@app.command()
def run(
    ctx: typer.Context,
    problem: str = typer.Option(..., "--problem", "-p", help="Problem id, e.g. F1, CF3, speed-reducer."),
    dim: int = typer.Option(None, "--dim", help="Dimension for scalable benchmarks."),
    snakes: int = typer.Option(None, "--snakes", help="Number of snakes [20]."),
    iters: int = typer.Option(None, "--iters", help="Iterations T [1000]."),
    gamma: float = typer.Option(None, "--gamma", help="Sigmoid steepness [6]."),
    half_circles: int = typer.Option(None, "--half-circles", help="Half circles per serpentine move [2]."),
    touch_points: int = typer.Option(None, "--touch-points", help="Touch points per caterpillar move [4]."),
    rcl: float = typer.Option(None, "--rcl", help="Caterpillar demarcation rate in (0, 1) [0.5]."),
    visible: int = typer.Option(None, "--visible", help="Visible list capacity [5]."),
    la_min: float = typer.Option(None, "--la-min", help="Final amplitude [1e-30]."),
    la0: float = typer.Option(None, "--la0", help="Initial amplitude [box diagonal / 5]."),
    delta_f: float = typer.Option(None, "--delta-f", help="Stop once visible spread < delta-f; 0 disables."),
    selection_epsilon: float = typer.Option(None, "--selection-epsilon", help="Roulette lift, f <= 0 [1e-12]."),
    seed: int = typer.Option(None, "--seed", help="Base seed; run r uses seed + r."),
    runs: int = typer.Option(None, "--runs", help="Independent runs [30]."),
    nfe: int = typer.Option(None, "--nfe", help="Evaluation budget; sets T when --iters is absent."),
    workers: int = typer.Option(None, "--workers", help="Runs executed concurrently [1]."),
    out: Path = typer.Option(None, "--out", help="Summary JSON path."),
    csv: Path = typer.Option(None, "--csv", help="Per-run CSV path."),
    trace: Path = typer.Option(None, "--trace", help="Trace CSV of run 0 (trail written alongside)."),
    config: Path = typer.Option(None, "--config", help="JSON or TOML file mirroring these flags."),
) -> None:
    """Run a seeded multi-run experiment on one problem."""
    quiet = _quiet(ctx)
    cfg = load_config()
    file = _read_run_file(config)

    try:
        target = make_problem(problem, _resolve(dim, file.get("dim"), None, None))
        base_seed = _resolve_seed(seed, file, cfg)
        flags = dict(
            snakes=snakes, iters=iters, gamma=gamma, half_circles=half_circles,
            touch_points=touch_points, rcl=rcl, visible=visible, la_min=la_min, la0=la0,
            delta_f=delta_f, selection_epsilon=selection_epsilon,
        )
        slls_cfg = _build_slls(flags, file, cfg, base_seed)
        budget = _resolve(nfe, file.get("nfe"), None, None)
        if budget is not None and iters is None and file.get("iters") is None:
            slls_cfg = slls_cfg.replace(T=iterations_for_budget(int(budget), slls_cfg))
        experiment = ExperimentConfig(
            problem_id=problem,
            dim=target.dim,
            slls=slls_cfg,
            n_runs=int(_resolve(runs, file.get("runs"), cfg.runs, 30)),
            base_seed=base_seed,
            workers=int(_resolve(workers, file.get("workers"), cfg.workers, 1)),
            policy=_policy(file, cfg),
            trace=trace is not None,
            summary_path=out or file.get("out"),
            runs_path=csv or file.get("csv"),
            trace_path=trace,
        )
    except (SllsError, ValueError) as e:
        _fail(str(e))

    if not quiet:
        typer.echo(
            f"→ {target.name}: {experiment.n_runs} runs × T={slls_cfg.T}, "
            f"{slls_cfg.n_snakes} snakes, seeds from {base_seed}"
        )

    try:
        with _progress(quiet) as progress:
            task = progress.add_task("runs", total=experiment.n_runs)
            summary = run_experiment(experiment, on_run_done=lambda r: progress.advance(task))
    except ExperimentError as e:
        for record in e.failures:
            typer.echo(f"  run {record.run_index} (seed {record.seed}): {record.error}")
        _fail(str(e))
    except SllsError as e:
        _fail(str(e))

    if not quiet:
        rows = summary.row()
        rows["NFE"] = summary.nfe
        console.print(_summary_table(f"{target.name} ({experiment.n_runs} runs)", rows))
        best = summary.best_record
        typer.echo(f"  best x = {format_vector(best.best_x)}")
        if target.constrained:
            status = "feasible" if best.feasible else "infeasible"
            typer.echo(f"  best solution is {status}")
            for name, value in best.constraint_values.items():
                typer.echo(f"    {name} = {format_number(value)}")

    try:
        written: list[Path] = []
        if experiment.summary_path:
            written.append(
                write_summary_json(summary, target, slls_cfg, base_seed, experiment.summary_path)
            )
        if experiment.runs_path:
            written.append(write_runs_csv(summary, experiment.runs_path))
        if experiment.trace_path:
            written += export_trace(summary.trace, experiment.trace_path, slls_cfg)
    except (OSError, SllsError) as e:
        _fail(f"Cannot write output: {e}")

    if not quiet:
        for path in written:
            typer.echo(f"✓ Wrote {path}")


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

@app.command("sweep")
def sweep_cmd(
    ctx: typer.Context,
    problem: str = typer.Option("weierstrass", "--problem", "-p", help="Problem id."),
    dim: int = typer.Option(None, "--dim", help="Dimension for scalable benchmarks."),
    param: str = typer.Option(..., "--param", help=f"One of: {', '.join(SWEEP_PARAMS)}"),
    values: str = typer.Option(None, "--values", help="Comma-separated values [published grid]."),
    runs: int = typer.Option(None, "--runs", help="Runs per value [30]."),
    seed: int = typer.Option(None, "--seed", help="Base seed."),
    workers: int = typer.Option(None, "--workers", help="Runs executed concurrently [1]."),
    out: Path = typer.Option(..., "--out", help="Sweep table CSV path."),
    config: Path = typer.Option(None, "--config", help="JSON or TOML file mirroring these flags."),
) -> None:
    """Sensitivity sweep of one parameter, others held at the sweep baseline."""
    quiet = _quiet(ctx)
    cfg = load_config()
    file = _read_run_file(config)

    if param not in SWEEP_PARAMS:
        _fail(f"Invalid parameter '{param}'. Choose from: {', '.join(SWEEP_PARAMS)}")
    try:
        grid = parse_values(values) if values else None
        base_seed = _resolve_seed(seed, file, cfg)
        experiment = ExperimentConfig(
            problem_id=problem,
            dim=_resolve(dim, file.get("dim"), None, None),
            slls=SllsConfig(seed=base_seed),
            n_runs=int(_resolve(runs, file.get("runs"), cfg.runs, 30)),
            base_seed=base_seed,
            workers=int(_resolve(workers, file.get("workers"), cfg.workers, 1)),
            policy=_policy(file, cfg),
        )
        make_problem(problem, experiment.dim)
    except (SllsError, ValueError) as e:
        _fail(str(e))

    try:
        with _progress(quiet) as progress:
            task = progress.add_task(f"sweep {param}", total=None)
            table = sweep(
                experiment, param, grid, on_column_done=lambda c: progress.advance(task)
            )
    except ExperimentError as e:
        _fail(str(e))
    except SllsError as e:
        _fail(str(e))

    frame = table.to_frame()
    if not quiet:
        view = Table(title=f"{normalize_id(problem)}: sensitivity to {param}")
        view.add_column(param)
        for label in frame.columns:
            view.add_column(str(label), justify="right")
        for row_name, row in frame.iterrows():
            view.add_row(str(row_name), *(format_number(float(v)) for v in row))
        console.print(view)

    try:
        path = write_sweep_csv(table, out)
    except OSError as e:
        _fail(f"Cannot write output: {e}")
    if not quiet:
        typer.echo(f"✓ Wrote {path}")


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------

@app.command()
def oracle(
    ctx: typer.Context,
    problem: str = typer.Option("clutch-brake", "--problem", "-p", help="Problem id."),
    out: Path = typer.Option(None, "--out", help="Oracle JSON path."),
) -> None:
    """Exhaustively solve a fully discrete problem."""
    if normalize_id(problem) not in ORACLE_PROBLEMS:
        _fail(f"No oracle for '{problem}'. Available: {', '.join(ORACLE_PROBLEMS)}")

    cfg = load_config()
    try:
        result = brute_force_clutch(_policy({}, cfg))
    except SllsError as e:
        _fail(str(e))

    if not _quiet(ctx):
        typer.echo(f"  best f = {format_number(result.best_f)}")
        typer.echo(f"  best x = {format_vector(result.best_x)}")
        typer.echo(f"  feasible = {result.feasible} of {result.grid_size}")
    if out:
        try:
            write_oracle_json(result, out)
        except OSError as e:
            _fail(f"Cannot write output: {e}")
        if not _quiet(ctx):
            typer.echo(f"✓ Wrote {out}")


# ---------------------------------------------------------------------------
# friedman
# ---------------------------------------------------------------------------

@app.command()
def friedman(
    ctx: typer.Context,
    input: Path = typer.Option(..., "--input", "-i", help="CSV: problems as rows, algorithms as columns."),
    higher_is_better: bool = typer.Option(False, "--higher-is-better", help="Rank larger scores first."),
    tiebreak: Path = typer.Option(None, "--tiebreak", help="Same-shaped CSV breaking ties (lower wins)."),
    out: Path = typer.Option(None, "--out", help="Ranks CSV path."),
) -> None:
    """Friedman mean ranks of algorithms across problems."""
    try:
        scores = read_scores_csv(input)
        secondary = read_scores_csv(tiebreak).to_numpy() if tiebreak else None
        result = friedman_rank(
            scores.to_numpy(), lower_is_better=not higher_is_better, tiebreak=secondary
        )
    except (OSError, ValueError, SllsError) as e:
        _fail(str(e))

    algorithms = [str(c) for c in scores.columns]
    if not _quiet(ctx):
        table = Table(title=f"Friedman mean ranks over {scores.shape[0]} problems")
        table.add_column("algorithm")
        table.add_column("mean rank", justify="right")
        table.add_column("rank", justify="right")
        for i in result.ordinal_ranks.argsort(kind="stable"):
            table.add_row(
                algorithms[i], format_number(float(result.mean_ranks[i]), 4),
                str(result.ordinal_ranks[i]),
            )
        console.print(table)
        typer.echo(
            f"  chi2 = {format_number(result.statistic)}, p = {format_number(result.pvalue)}"
        )

    if out:
        try:
            write_ranks_csv(result, algorithms, out)
        except OSError as e:
            _fail(f"Cannot write output: {e}")
        if not _quiet(ctx):
            typer.echo(f"✓ Wrote {out}")


# ---------------------------------------------------------------------------
# Config subcommands
# ---------------------------------------------------------------------------

@config_app.command("show")
def config_show() -> None:
    """Show current configuration."""
    cfg = load_config()
    path = get_config_path()
    typer.echo(f"Config file: {path}")
    typer.echo("")
    for key in SETTABLE_KEYS:
        if key.startswith("penalty."):
            value = getattr(cfg.penalty, key.split(".", 1)[1])
        else:
            value = getattr(cfg, key)
        typer.echo(f"{key:<20} = {'(default)' if value is None else value}")


@config_app.command("set")
def config_set(
    key: str = typer.Argument(..., help=f"Config key. Valid: {', '.join(SETTABLE_KEYS)}"),
    value: str = typer.Argument(..., help="Value to set."),
) -> None:
    """Set a persistent configuration value."""
    try:
        set_config_value(key, value)
        typer.echo(f"✓ Set {key} = {value}")
    except ValueError as e:
        typer.echo(f"✗ {e}")
        raise typer.Exit(1)
