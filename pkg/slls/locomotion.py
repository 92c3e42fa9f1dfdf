"""Touch-point generation for serpentine and caterpillar moves."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    MAX_RESAMPLES,
    ContractError,
    DegenerateMoveError,
    Rng,
    SearchSpace,
    clamp,
    distance,
    mirror,
    point_along,
    sample_uniform,
)


@dataclass
class SerpentineMove:
    start: np.ndarray
    touch_points: np.ndarray  # shape (2 * n_half_circles, dim)
    actual_amplitude: float

    @property
    def foothold(self) -> np.ndarray:
        return self.touch_points[-1]


@dataclass
class CaterpillarMove:
    start: np.ndarray
    target: np.ndarray
    touch_points: np.ndarray  # shape (n_touch_points, dim)
    r_cl: float

    @property
    def foothold(self) -> np.ndarray:
        return self.touch_points[-1]


def _draw_away_from(base: np.ndarray, space: SearchSpace, rng: Rng) -> np.ndarray:
    for _ in range(MAX_RESAMPLES):
        aux = sample_uniform(space, rng)
        if not np.array_equal(aux, base):
            return aux
    raise DegenerateMoveError(f"auxiliary point matched the base {MAX_RESAMPLES} times")


def serpentine(
    start: np.ndarray,
    space: SearchSpace,
    amplitude: float,
    n_half_circles: int,
    rng: Rng,
) -> SerpentineMove:
    """
    Build an S-shaped move of 2 * n_half_circles touch points.

    The end point sits `amplitude` away from start toward a random auxiliary point
    (clamped into the box). The odd points split start->end evenly, the first even
    point is swung off the first half-segment, and each later even point mirrors
    its predecessor-but-one about the odd point between them.
    """
    if amplitude <= 0:
        raise ContractError(f"amplitude must be positive, got {amplitude}")
    if n_half_circles < 1:
        raise ContractError(f"n_half_circles must be >= 1, got {n_half_circles}")

    start = clamp(space, start)
    n = n_half_circles

    end: Optional[np.ndarray] = None
    for _ in range(MAX_RESAMPLES):
        aux = _draw_away_from(start, space, rng)
        candidate = clamp(space, point_along(start, aux, amplitude))
        if not np.array_equal(candidate, start):
            end = candidate
            break
    if end is None:
        raise DegenerateMoveError("clamped end point kept collapsing onto the start")
    actual = distance(start, end)

    # points[i - 1] holds X_i, so points[0] is the start and points[2n] the end.
    points = np.empty((2 * n + 1, space.dim))
    points[0] = start
    for i in range(3, 2 * n, 2):
        points[i - 1] = clamp(space, start + ((i - 1) / (2 * n)) * (end - start))
    points[2 * n] = end

    midpoint = 0.5 * (points[0] + points[2])
    aux = _draw_away_from(midpoint, space, rng)
    points[1] = clamp(space, point_along(midpoint, aux, distance(points[0], midpoint)))

    for i in range(4, 2 * n + 1, 2):
        points[i - 1] = clamp(space, mirror(points[i - 3], points[i - 2]))

    return SerpentineMove(start=start, touch_points=points[1:], actual_amplitude=actual)


def demarcation_coefficient(r_cl: float, j: int) -> float:
    """
    Fraction of start->target covered by the j-th caterpillar touch point.

    Equal to the alternating sum of (-1)^(k-1) C(j, k) r_cl^k over k = 1..j,
    which collapses to 1 - (1 - r_cl)^j.
    """
    return 1.0 - (1.0 - r_cl) ** j


def caterpillar(
    start: np.ndarray,
    target: np.ndarray,
    r_cl: float,
    n_touch_points: int,
    space: Optional[SearchSpace] = None,
) -> CaterpillarMove:
    if not 0.0 < r_cl < 1.0:
        raise ContractError(f"r_cl must lie in (0, 1), got {r_cl}")
    if n_touch_points < 1:
        raise ContractError(f"n_touch_points must be >= 1, got {n_touch_points}")

    start = np.asarray(start, dtype=float)
    target = np.asarray(target, dtype=float)
    if start.shape != target.shape:
        raise ContractError(f"dimension mismatch: {start.shape} vs {target.shape}")

    coefficients = np.array(
        [demarcation_coefficient(r_cl, j) for j in range(1, n_touch_points + 1)]
    )
    points = start + coefficients[:, None] * (target - start)
    if space is not None:
        points = np.clip(points, space.lower, space.upper)
    return CaterpillarMove(start=start, target=target, touch_points=points, r_cl=r_cl)
