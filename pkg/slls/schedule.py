"""Sigmoid learning efficiency, amplitude decay and initial amplitude."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from scipy.special import expit

from .core import ContractError, Rng, SearchSpace


class Mode(IntEnum):
    # Values double as the trace encoding.
    SERPENTINE = -1
    CATERPILLAR = 1


@dataclass(frozen=True)
class Schedule:
    T: int
    gamma: float
    la0: float
    la_min: float

    def __post_init__(self) -> None:
        if self.T < 1:
            raise ContractError(f"T must be >= 1, got {self.T}")
        if self.gamma <= 0:
            raise ContractError(f"gamma must be positive, got {self.gamma}")
        if self.la_min < 0:
            raise ContractError(f"la_min must be non-negative, got {self.la_min}")
        if self.la_min > self.la0:
            raise ContractError(f"la_min ({self.la_min}) exceeds la0 ({self.la0})")


def learning_efficiency(t: float, sched: Schedule) -> float:
    """P(t) = 1 / (1 + exp((2 gamma / T)(T / 2 - t)))."""
    return float(expit((2.0 * sched.gamma / sched.T) * (t - sched.T / 2.0)))


def amplitude(t: float, sched: Schedule) -> float:
    return sched.la0 - (sched.la0 - sched.la_min) * learning_efficiency(t, sched)


def initial_amplitude(space: SearchSpace) -> float:
    """One fifth of the box diagonal."""
    return space.diagonal / 5.0


def choose_mode(t: float, sched: Schedule, rng: Rng) -> Mode:
    if rng.random() < learning_efficiency(t, sched):
        return Mode.CATERPILLAR
    return Mode.SERPENTINE
