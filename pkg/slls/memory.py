"""Bounded, ascending list of the best spots seen, with roulette-wheel selection."""

from __future__ import annotations

import bisect
from typing import Iterable, Sequence

import numpy as np

from .core import ContractError, Rng, Spot

DEFAULT_SELECTION_EPSILON = 1e-12


def shift_values(values: Sequence[float], epsilon: float = DEFAULT_SELECTION_EPSILON) -> np.ndarray:
    """
    Make every value positive without collapsing the wheel onto the best spot.

    Positive lists pass through unchanged. Otherwise the list is lifted by
    2 * |min| + epsilon, so the best value becomes |min| + epsilon and the
    others keep their distance from it.
    """
    arr = np.asarray(values, dtype=float)
    lowest = arr.min()
    if lowest > 0:
        return arr.copy()
    return arr - 2.0 * lowest + epsilon


def roulette_probabilities(shifted: Sequence[float]) -> np.ndarray:
    """Selection probability proportional to 1 / value."""
    inverse = 1.0 / np.asarray(shifted, dtype=float)
    return inverse / inverse.sum()


def roulette_index(cumulative: np.ndarray, ran: float | np.ndarray) -> np.ndarray:
    """First index j with cumulative[j - 1] < ran <= cumulative[j]."""
    index = np.searchsorted(cumulative, ran, side="left")
    return np.minimum(index, len(cumulative) - 1)


class VisibleList:
    """Spots sorted by ascending objective, never longer than `capacity`."""

    def __init__(self, capacity: int) -> None:
        if capacity < 1:
            raise ContractError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._spots: list[Spot] = []
        self._values: list[float] = []

    def __len__(self) -> int:
        return len(self._spots)

    def __iter__(self):
        return iter(self._spots)

    def __getitem__(self, index: int) -> Spot:
        return self._spots[index]

    @property
    def spots(self) -> list[Spot]:
        return list(self._spots)

    @property
    def values(self) -> list[float]:
        return list(self._values)

    @property
    def best(self) -> Spot:
        if not self._spots:
            raise ContractError("visible list is empty")
        return self._spots[0]

    @property
    def worst(self) -> Spot:
        if not self._spots:
            raise ContractError("visible list is empty")
        return self._spots[-1]

    @property
    def spread(self) -> float:
        """Worst minus best objective value."""
        return self._values[-1] - self._values[0]

    def insert(self, spot: Spot) -> bool:
        """Offer a spot; returns True when the list changed."""
        if spot.f is None:
            raise ContractError("cannot insert an unevaluated spot")
        f = float(spot.f)
        full = len(self._spots) >= self.capacity
        if full and f >= self._values[-1]:
            return False
        # Equal values keep the incumbent ahead of the newcomer.
        position = bisect.bisect_right(self._values, f)
        self._values.insert(position, f)
        self._spots.insert(position, spot)
        if len(self._spots) > self.capacity:
            self._values.pop()
            self._spots.pop()
        return True

    def probabilities(self, epsilon: float = DEFAULT_SELECTION_EPSILON) -> np.ndarray:
        return roulette_probabilities(shift_values(self._values, epsilon))

    def select_target(self, rng: Rng, epsilon: float = DEFAULT_SELECTION_EPSILON) -> Spot:
        if not self._spots:
            raise ContractError("cannot select from an empty visible list")
        cumulative = np.cumsum(self.probabilities(epsilon))
        return self._spots[int(roulette_index(cumulative, rng.random()))]


def seed_initial(initial: Iterable[Spot], capacity: int) -> VisibleList:
    """Visible list holding the `capacity` lowest-valued spots, ties by input order."""
    visible = VisibleList(capacity)
    for spot in initial:
        visible.insert(spot)
    return visible
