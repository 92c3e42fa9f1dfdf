"""Search-space representation, vector geometry and the shared Rng contract."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Protocol, Sequence

import numpy as np

Rng = np.random.Generator

# Resamples of an auxiliary point before a move is declared degenerate.
MAX_RESAMPLES = 16

_UINT64_MASK = (1 << 64) - 1


class SllsError(Exception):
    """Base class for every error raised by slls."""


class ContractError(SllsError, ValueError):
    """A precondition of an operation was violated."""


class DegenerateMoveError(SllsError):
    """A move direction collapsed to zero length."""


class ProblemError(SllsError):
    """Unknown problem, invalid dimension, or a non-finite evaluation."""


class ExperimentError(SllsError):
    """One or more runs of an experiment failed."""

    def __init__(self, message: str, failures: Sequence = ()) -> None:
        super().__init__(message)
        self.failures = list(failures)


@dataclass(frozen=True, eq=False)
class SearchSpace:
    lower: np.ndarray
    upper: np.ndarray
    discrete_sets: tuple[Optional[np.ndarray], ...] = ()

    def __post_init__(self) -> None:
        lower = np.array(self.lower, dtype=float).reshape(-1)
        upper = np.array(self.upper, dtype=float).reshape(-1)
        if lower.shape != upper.shape or lower.size == 0:
            raise ContractError("lower and upper bounds must be non-empty and equal length")
        if np.any(lower > upper):
            raise ContractError("every lower bound must be <= its upper bound")

        sets: list[Optional[np.ndarray]] = list(self.discrete_sets) or [None] * lower.size
        if len(sets) != lower.size:
            raise ContractError("discrete_sets must have one entry per dimension")
        for k, values in enumerate(sets):
            if values is None or len(values) == 0:
                sets[k] = None
                continue
            arr = np.asarray(values, dtype=float)
            if np.any(np.diff(arr) <= 0):
                raise ContractError(f"discrete set for dimension {k} must be strictly ascending")
            if arr[0] < lower[k] or arr[-1] > upper[k]:
                raise ContractError(f"discrete set for dimension {k} leaves the bounds")
            sets[k] = arr

        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "discrete_sets", tuple(sets))

    @classmethod
    def box(cls, lower: float, upper: float, dim: int) -> SearchSpace:
        """Uniform bounds [lower, upper] in every one of `dim` dimensions."""
        if dim < 1:
            raise ContractError(f"dimension must be >= 1, got {dim}")
        return cls(np.full(dim, float(lower)), np.full(dim, float(upper)))

    @property
    def dim(self) -> int:
        return int(self.lower.size)

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(self.upper - self.lower))

    @property
    def has_discrete(self) -> bool:
        return any(values is not None for values in self.discrete_sets)


@dataclass
class Spot:
    x: np.ndarray
    f: Optional[float] = field(default=None)

    @property
    def evaluated(self) -> bool:
        return self.f is not None


class Objective(Protocol):
    """Anything the optimizer can minimize."""

    space: SearchSpace

    def evaluate(self, x: np.ndarray, rng: Optional[Rng] = None) -> float: ...


def make_rng(seed: int) -> Rng:
    """Seeded generator; equal seeds give bit-identical draw sequences."""
    return np.random.Generator(np.random.PCG64(int(seed) & _UINT64_MASK))


def _check_pair(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ContractError(f"dimension mismatch: {a.shape} vs {b.shape}")


def clamp(space: SearchSpace, p: np.ndarray) -> np.ndarray:
    """Project p onto the box: out-of-range components go to the nearest bound."""
    p = np.asarray(p, dtype=float)
    if p.shape != (space.dim,):
        raise ContractError(f"expected a vector of length {space.dim}, got shape {p.shape}")
    return np.clip(p, space.lower, space.upper)


def distance(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_pair(a, b)
    return float(np.linalg.norm(b - a))


def point_along(a: np.ndarray, b: np.ndarray, length: float) -> np.ndarray:
    """Point at distance `length` from a on the ray a -> b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    span = distance(a, b)
    if span == 0.0:
        raise DegenerateMoveError("direction points coincide")
    if length < 0:
        raise ContractError(f"length must be non-negative, got {length}")
    return a + (length / span) * (b - a)


def mirror(a: np.ndarray, center: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    center = np.asarray(center, dtype=float)
    _check_pair(a, center)
    return 2.0 * center - a


def sample_uniform(space: SearchSpace, rng: Rng) -> np.ndarray:
    return np.asarray(rng.uniform(space.lower, space.upper), dtype=float)
