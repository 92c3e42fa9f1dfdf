"""Pure utility functions and constants for slls."""

from __future__ import annotations

import math

# Human-facing tables use six significant digits.
DISPLAY_DIGITS = 6

# Engineering problem ids accepted by the oracle command
ORACLE_PROBLEMS = ['clutch_brake']


def parse_values(text: str) -> list[float]:
    """Parse a comma-separated list like '5,10,15' or '0.3, 0.4'."""
    parts = [p.strip() for p in text.split(',') if p.strip()]
    if not parts:
        raise ValueError("expected at least one value")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"not a comma-separated list of numbers: '{text}'") from None


def format_number(value: float | None, digits: int = DISPLAY_DIGITS) -> str:
    """Format a value for display, e.g. 0.313657, 1.28e-03, 80000."""
    if value is None:
        return '-'
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if math.isnan(value) or math.isinf(value):
        return str(value)
    return f"{value:.{digits}g}"


def format_vector(values, digits: int = DISPLAY_DIGITS) -> str:
    """Bracketed, comma-separated rendering of a solution vector."""
    return '[' + ', '.join(format_number(float(v), digits) for v in values) + ']'


def format_bounds(bounds) -> str:
    """Render a descriptor's bounds entry: [lo, hi] or per-dimension pairs."""
    if bounds and isinstance(bounds[0], list):
        return 'per-dimension'
    lo, hi = bounds
    return f"[{format_number(lo)}, {format_number(hi)}]"
