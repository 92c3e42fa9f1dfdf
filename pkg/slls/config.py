"""TOML-based persistent defaults and per-invocation run-config files."""

from __future__ import annotations

import json
import logging
import os
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Optional

from platformdirs import user_config_dir

if sys.version_info >= (3, 11):
    import tomllib
else:
    try:
        import tomllib  # type: ignore[no-redef]
    except ImportError:
        import tomli as tomllib  # type: ignore[no-redef]

SEED_ENV_VAR = "SLLS_SEED"

logger = logging.getLogger(__name__)


def get_config_path() -> Path:
    return Path(user_config_dir("slls")) / "config.toml"


@dataclass
class PenaltyConfig:
    rho: Optional[float] = None
    eq_tolerance: Optional[float] = None


@dataclass
class Config:
    """Persistent defaults; None means 'not set, use the built-in default'."""

    snakes: Optional[int] = None
    iters: Optional[int] = None
    gamma: Optional[float] = None
    half_circles: Optional[int] = None
    touch_points: Optional[int] = None
    rcl: Optional[float] = None
    visible: Optional[int] = None
    la_min: Optional[float] = None
    delta_f: Optional[float] = None
    runs: Optional[int] = None
    seed: Optional[int] = None
    workers: Optional[int] = None
    selection_epsilon: Optional[float] = None
    penalty: PenaltyConfig = field(default_factory=PenaltyConfig)


_INT_KEYS = {
    "snakes", "iters", "half_circles", "touch_points", "visible", "runs", "seed", "workers",
}
_DEFAULT_KEYS = [f.name for f in fields(Config) if f.name != "penalty"]


def _typed(key: str, value: Any) -> Any:
    name = key.split(".")[-1]
    if value is None:
        return None
    if name in _INT_KEYS:
        return int(value)
    return float(value)


def _read_table(table: dict[str, Any], keys: list[str], prefix: str = "") -> dict[str, Any]:
    values: dict[str, Any] = {}
    for key in keys:
        try:
            values[key] = _typed(key, table.get(key))
        except (TypeError, ValueError):
            logger.warning(
                "Ignoring config key %s%s: bad value %r", prefix, key, table.get(key)
            )
            values[key] = None
    return values


def load_config(path: Path | None = None) -> Config:
    """Load config from TOML file, falling back to defaults key by key."""
    config_path = path or get_config_path()
    if not config_path.exists():
        return Config()

    try:
        with open(config_path, "rb") as f:
            data = tomllib.load(f)
    except Exception as e:
        logger.warning("Ignoring unreadable config %s: %s", config_path, e)
        return Config()

    defaults = _read_table(data.get("defaults", {}), _DEFAULT_KEYS)
    penalty = _read_table(data.get("penalty", {}), ["rho", "eq_tolerance"], prefix="penalty.")
    return Config(**defaults, penalty=PenaltyConfig(**penalty))


def save_config(config: Config, path: Path | None = None) -> None:
    """Write config to TOML file; unset keys are left out."""
    config_path = path or get_config_path()
    config_path.parent.mkdir(parents=True, exist_ok=True)

    lines = ["[defaults]"]
    for key in _DEFAULT_KEYS:
        value = getattr(config, key)
        if value is not None:
            lines.append(f"{key} = {value!r}")
    lines += ["", "[penalty]"]
    for key in ("rho", "eq_tolerance"):
        value = getattr(config.penalty, key)
        if value is not None:
            lines.append(f"{key} = {value!r}")
    lines.append("")
    config_path.write_text("\n".join(lines))


# Valid keys for `slls config set`
SETTABLE_KEYS = _DEFAULT_KEYS + ["penalty.rho", "penalty.eq_tolerance"]


def set_config_value(key: str, value: str, path: Path | None = None) -> Config:
    """Set a single config value by dotted key name."""
    if key not in SETTABLE_KEYS:
        raise ValueError(f"Unknown config key: {key}. Valid keys: {SETTABLE_KEYS}")

    config = load_config(path)
    typed_value = _typed(key, value)

    if key.startswith("penalty."):
        setattr(config.penalty, key.split(".", 1)[1], typed_value)
    else:
        setattr(config, key, typed_value)

    save_config(config, path)
    return config


def load_run_config(path: Path) -> dict[str, Any]:
    """
    Read a run-config file (JSON, or TOML by suffix) whose keys mirror the long flags.

    Dashes and underscores are interchangeable: {"half-circles": 3} and
    {"half_circles": 3} mean the same thing. Nested tables are flattened one level,
    so a TOML [penalty] table yields 'rho' and 'eq_tolerance'.
    """
    path = Path(path)
    with open(path, "rb") as f:
        if path.suffix.lower() == ".toml":
            data = tomllib.load(f)
        else:
            data = json.load(f)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected an object of option names")

    flat: dict[str, Any] = {}
    for key, value in data.items():
        if isinstance(value, dict):
            flat.update({k.replace("-", "_"): v for k, v in value.items()})
        else:
            flat[key.replace("-", "_")] = value
    return flat


def env_seed() -> Optional[int]:
    raw = os.environ.get(SEED_ENV_VAR, "").strip()
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{SEED_ENV_VAR} must be an integer, got '{raw}'") from None
