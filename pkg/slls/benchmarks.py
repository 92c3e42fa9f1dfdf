"""Classic benchmark suite F1-F23, Weierstrass, and composition functions CF1-CF6."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import ProblemError, SearchSpace, make_rng
from .problems import Problem

Function = Callable[[np.ndarray], float]

DEFAULT_DIM = 30
WEIERSTRASS_DIM = 5


# ---------------------------------------------------------------------------
# Scalable functions
# ---------------------------------------------------------------------------

def sphere(x: np.ndarray) -> float:
    return float(np.sum(x**2))


def schwefel_2_22(x: np.ndarray) -> float:
    ax = np.abs(x)
    return float(np.sum(ax) + np.prod(ax))


def schwefel_1_2(x: np.ndarray) -> float:
    return float(np.sum(np.cumsum(x) ** 2))


def schwefel_2_21(x: np.ndarray) -> float:
    return float(np.max(np.abs(x)))


def rosenbrock(x: np.ndarray) -> float:
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1.0) ** 2))


def shifted_square(x: np.ndarray) -> float:
    return float(np.sum((x + 0.5) ** 2))


def quartic(x: np.ndarray) -> float:
    """Deterministic part of the noisy quartic; the noise is added by Problem."""
    i = np.arange(1, x.size + 1)
    return float(np.sum(i * x**4))


def schwefel_2_26(x: np.ndarray) -> float:
    return float(np.sum(-x * np.sin(np.sqrt(np.abs(x)))))


def rastrigin(x: np.ndarray) -> float:
    return float(np.sum(x**2 - 10.0 * np.cos(2.0 * np.pi * x) + 10.0))


def ackley(x: np.ndarray) -> float:
    n = x.size
    return float(
        -20.0 * np.exp(-0.2 * np.sqrt(np.sum(x**2) / n))
        - np.exp(np.sum(np.cos(2.0 * np.pi * x)) / n)
        + 20.0
        + np.e
    )


def griewank(x: np.ndarray) -> float:
    i = np.arange(1, x.size + 1)
    return float(np.sum(x**2) / 4000.0 - np.prod(np.cos(x / np.sqrt(i))) + 1.0)


def _u(x: np.ndarray, a: float, k: float, m: int) -> np.ndarray:
    return np.where(x > a, k * (x - a) ** m, np.where(x < -a, k * (-x - a) ** m, 0.0))


def penalized_1(x: np.ndarray) -> float:
    n = x.size
    y = 1.0 + (x + 1.0) / 4.0
    body = (
        10.0 * np.sin(np.pi * y[0]) ** 2
        + np.sum((y[:-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * y[1:]) ** 2))
        + (y[-1] - 1.0) ** 2
    )
    return float(np.pi / n * body + np.sum(_u(x, 10.0, 100.0, 4)))


def penalized_2(x: np.ndarray) -> float:
    body = (
        np.sin(3.0 * np.pi * x[0]) ** 2
        + np.sum((x[:-1] - 1.0) ** 2 * (1.0 + np.sin(3.0 * np.pi * x[1:]) ** 2))
        + (x[-1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * x[-1]) ** 2)
    )
    return float(0.1 * body + np.sum(_u(x, 5.0, 100.0, 4)))


_W_A, _W_B, _W_KMAX = 0.5, 3.0, 20
_W_AK = _W_A ** np.arange(_W_KMAX + 1)
_W_BK = _W_B ** np.arange(_W_KMAX + 1)
_W_OFFSET = float(np.sum(_W_AK * np.cos(np.pi * _W_BK)))


def weierstrass(x: np.ndarray) -> float:
    inner = _W_AK * np.cos(2.0 * np.pi * np.outer(x + 0.5, _W_BK))
    return float(np.sum(inner) - x.size * _W_OFFSET)


# ---------------------------------------------------------------------------
# Fixed-dimension functions
# ---------------------------------------------------------------------------

_FOXHOLE_ROW = np.array([-32.0, -16.0, 0.0, 16.0, 32.0])
_FOXHOLES = np.vstack([np.tile(_FOXHOLE_ROW, 5), np.repeat(_FOXHOLE_ROW, 5)])


def shekel_foxholes(x: np.ndarray) -> float:
    j = np.arange(1, 26)
    inner = j + np.sum((x[:, None] - _FOXHOLES) ** 6, axis=0)
    return float(1.0 / (1.0 / 500.0 + np.sum(1.0 / inner)))


_KOWALIK_A = np.array(
    [0.1957, 0.1947, 0.1735, 0.16, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246]
)
_KOWALIK_B = 1.0 / np.array([0.25, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0])


def kowalik(x: np.ndarray) -> float:
    b = _KOWALIK_B
    model = x[0] * (b**2 + b * x[1]) / (b**2 + b * x[2] + x[3])
    return float(np.sum((_KOWALIK_A - model) ** 2))


def six_hump_camel(x: np.ndarray) -> float:
    x1, x2 = x
    return float(
        4 * x1**2 - 2.1 * x1**4 + x1**6 / 3 + x1 * x2 - 4 * x2**2 + 4 * x2**4
    )


def branin(x: np.ndarray) -> float:
    x1, x2 = x
    return float(
        (x2 - 5.1 / (4 * np.pi**2) * x1**2 + 5 / np.pi * x1 - 6) ** 2
        + 10 * (1 - 1 / (8 * np.pi)) * np.cos(x1)
        + 10
    )


def goldstein_price(x: np.ndarray) -> float:
    x1, x2 = x
    first = 1 + (x1 + x2 + 1) ** 2 * (
        19 - 14 * x1 + 3 * x1**2 - 14 * x2 + 6 * x1 * x2 + 3 * x2**2
    )
    second = 30 + (2 * x1 - 3 * x2) ** 2 * (
        18 - 32 * x1 + 12 * x1**2 + 48 * x2 - 36 * x1 * x2 + 27 * x2**2
    )
    return float(first * second)


_HARTMANN_C = np.array([1.0, 1.2, 3.0, 3.2])
_HARTMANN3_A = np.array(
    [[3.0, 10.0, 30.0], [0.1, 10.0, 35.0], [3.0, 10.0, 30.0], [0.1, 10.0, 35.0]]
)
_HARTMANN3_P = np.array(
    [
        [0.3689, 0.1170, 0.2673],
        [0.4699, 0.4387, 0.7470],
        [0.1091, 0.8732, 0.5547],
        [0.03815, 0.5743, 0.8828],
    ]
)
_HARTMANN6_A = np.array(
    [
        [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
        [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
        [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
        [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
    ]
)
_HARTMANN6_P = np.array(
    [
        [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
        [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
        [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
        [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
    ]
)


def _hartmann(x: np.ndarray, a: np.ndarray, p: np.ndarray) -> float:
    return float(-np.sum(_HARTMANN_C * np.exp(-np.sum(a * (x - p) ** 2, axis=1))))


def hartmann_3(x: np.ndarray) -> float:
    return _hartmann(x, _HARTMANN3_A, _HARTMANN3_P)


def hartmann_6(x: np.ndarray) -> float:
    return _hartmann(x, _HARTMANN6_A, _HARTMANN6_P)


_SHEKEL_A = np.array(
    [
        [4.0, 4.0, 4.0, 4.0],
        [1.0, 1.0, 1.0, 1.0],
        [8.0, 8.0, 8.0, 8.0],
        [6.0, 6.0, 6.0, 6.0],
        [3.0, 7.0, 3.0, 7.0],
        [2.0, 9.0, 2.0, 9.0],
        [5.0, 5.0, 3.0, 3.0],
        [8.0, 1.0, 8.0, 1.0],
        [6.0, 2.0, 6.0, 2.0],
        [7.0, 3.6, 7.0, 3.6],
    ]
)
_SHEKEL_C = np.array([0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5])


def shekel(m: int) -> Function:
    a, c = _SHEKEL_A[:m], _SHEKEL_C[:m]

    def fn(x: np.ndarray) -> float:
        return float(-np.sum(1.0 / (np.sum((x - a) ** 2, axis=1) + c)))

    fn.__name__ = f"shekel_{m}"
    return fn


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Entry:
    fn: Function
    lower: float
    upper: float
    known_best: float  # per dimension when scalable_best is True
    fixed_dim: Optional[int] = None
    scalable_best: bool = False
    label: str = ""


_CATALOG: dict[str, _Entry] = {
    "F1": _Entry(sphere, -100, 100, 0.0, label="Sphere"),
    "F2": _Entry(schwefel_2_22, -10, 10, 0.0, label="Schwefel 2.22"),
    "F3": _Entry(schwefel_1_2, -100, 100, 0.0, label="Schwefel 1.2"),
    "F4": _Entry(schwefel_2_21, -100, 100, 0.0, label="Schwefel 2.21"),
    "F5": _Entry(rosenbrock, -30, 30, 0.0, label="Rosenbrock"),
    "F6": _Entry(shifted_square, -100, 100, 0.0, label="Step"),
    "F7": _Entry(quartic, -1.28, 1.28, 0.0, label="Quartic with noise"),
    "F8": _Entry(
        schwefel_2_26, -500, 500, -418.98288727243374, scalable_best=True, label="Schwefel 2.26"
    ),
    "F9": _Entry(rastrigin, -5.12, 5.12, 0.0, label="Rastrigin"),
    "F10": _Entry(ackley, -32, 32, 0.0, label="Ackley"),
    "F11": _Entry(griewank, -512, 512, 0.0, label="Griewank"),
    "F12": _Entry(penalized_1, -50, 50, 0.0, label="Penalized 1"),
    "F13": _Entry(penalized_2, -50, 50, 0.0, label="Penalized 2"),
    "F14": _Entry(shekel_foxholes, -65.536, 65.536, 0.998003837794449, 2, label="Foxholes"),
    "F15": _Entry(kowalik, -5, 5, 3.0748598780e-4, 4, label="Kowalik"),
    "F16": _Entry(six_hump_camel, -5, 5, -1.0316284534898774, 2, label="Six-hump camel"),
    "F17": _Entry(branin, -5, 5, 0.39788735772973816, 2, label="Branin"),
    "F18": _Entry(goldstein_price, -2, 2, 3.0, 2, label="Goldstein-Price"),
    "F19": _Entry(hartmann_3, 0, 1, -3.8627821478207536, 3, label="Hartmann 3"),
    "F20": _Entry(hartmann_6, 0, 1, -3.3223680114155147, 6, label="Hartmann 6"),
    "F21": _Entry(shekel(5), 0, 10, -10.153199679058231, 4, label="Shekel 5"),
    "F22": _Entry(shekel(7), 0, 10, -10.402940566818664, 4, label="Shekel 7"),
    "F23": _Entry(shekel(10), 0, 10, -10.536409816692046, 4, label="Shekel 10"),
    "weierstrass": _Entry(
        weierstrass, -0.5, 0.5, 0.0, label="Weierstrass (a=0.5, b=3, kmax=20)"
    ),
}

BENCHMARK_IDS: tuple[str, ...] = tuple(_CATALOG)
SCALABLE_IDS: tuple[str, ...] = tuple(k for k, e in _CATALOG.items() if e.fixed_dim is None)

KNOWN_OPTIMA: dict[str, Callable[[int], np.ndarray]] = {
    "F1": lambda d: np.zeros(d),
    "F2": lambda d: np.zeros(d),
    "F3": lambda d: np.zeros(d),
    "F4": lambda d: np.zeros(d),
    "F5": lambda d: np.ones(d),
    "F6": lambda d: np.full(d, -0.5),
    "F7": lambda d: np.zeros(d),
    "F8": lambda d: np.full(d, 420.96874635998),
    "F9": lambda d: np.zeros(d),
    "F10": lambda d: np.zeros(d),
    "F11": lambda d: np.zeros(d),
    "F12": lambda d: np.full(d, -1.0),
    "F13": lambda d: np.ones(d),
    "F14": lambda d: np.array([-31.97833, -31.97833]),
    "F15": lambda d: np.array([0.192833, 0.190836, 0.123117, 0.135766]),
    "F16": lambda d: np.array([0.0898420131003, -0.7126564030207]),
    "F17": lambda d: np.array([np.pi, 2.275]),
    "F18": lambda d: np.array([0.0, -1.0]),
    "F19": lambda d: np.array([0.114614, 0.555649, 0.852547]),
    "F20": lambda d: np.array([0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573]),
    "F21": lambda d: np.array([4.0, 4.0, 4.0, 4.0]),
    "F22": lambda d: np.array([4.0, 4.0, 4.0, 4.0]),
    "F23": lambda d: np.array([4.0, 4.0, 4.0, 4.0]),
    "weierstrass": lambda d: np.zeros(d),
}


def make_benchmark(
    problem_id: str, dim: Optional[int] = None, noise: bool = True
) -> Problem:
    """
    Build a benchmark problem.

    Args:
        problem_id: One of F1..F23 or 'weierstrass'.
        dim: Dimension for scalable functions; fixed-dimension functions accept
            only their own dimension (or None).
        noise: F7 only. When False the additive uniform noise term is dropped.
    """
    entry = _CATALOG.get(problem_id)
    if entry is None:
        raise ProblemError(f"Unknown benchmark id: {problem_id}")

    if entry.fixed_dim is not None:
        if dim not in (None, entry.fixed_dim):
            raise ProblemError(f"{problem_id} is defined for dimension {entry.fixed_dim} only")
        dim = entry.fixed_dim
    elif dim is None:
        dim = WEIERSTRASS_DIM if problem_id == "weierstrass" else DEFAULT_DIM
    if dim < 1 or (problem_id == "F5" and dim < 2):
        raise ProblemError(f"invalid dimension {dim} for {problem_id}")

    known_best = entry.known_best * dim if entry.scalable_best else entry.known_best
    return Problem(
        name=problem_id,
        space=SearchSpace.box(entry.lower, entry.upper, dim),
        raw_objective=entry.fn,
        known_best=known_best,
        noise=noise and problem_id == "F7",
        description=entry.label,
    )


# ---------------------------------------------------------------------------
# Composition functions
# ---------------------------------------------------------------------------

COMPOSITION_DIM = 10
COMPOSITION_SEED = 2005
_C = 2000.0
_BIAS = 100.0 * np.arange(10)

_PAIRS_CF4 = [ackley] * 2 + [rastrigin] * 2 + [weierstrass] * 2 + [griewank] * 2 + [sphere] * 2
_PAIRS_CF56 = [rastrigin] * 2 + [weierstrass] * 2 + [griewank] * 2 + [ackley] * 2 + [sphere] * 2

_LAMBDA_CF5 = np.array(
    [1 / 5, 1 / 5, 5 / 0.5, 5 / 0.5, 5 / 100, 5 / 100, 5 / 32, 5 / 32, 5 / 100, 5 / 100]
)

_COMPOSITIONS: dict[str, tuple[list[Function], np.ndarray, np.ndarray]] = {
    "CF1": ([sphere] * 10, np.ones(10), np.full(10, 5 / 100)),
    "CF2": ([griewank] * 10, np.ones(10), np.full(10, 5 / 100)),
    "CF3": ([griewank] * 10, np.ones(10), np.ones(10)),
    "CF4": (
        _PAIRS_CF4,
        np.ones(10),
        np.array([5 / 32, 5 / 32, 1, 1, 5 / 0.5, 5 / 0.5, 5 / 100, 5 / 100, 5 / 100, 5 / 100]),
    ),
    "CF5": (
        _PAIRS_CF56,
        np.ones(10),
        _LAMBDA_CF5,
    ),
    "CF6": (
        _PAIRS_CF56,
        np.linspace(0.1, 1.0, 10),
        np.linspace(0.1, 1.0, 10) * _LAMBDA_CF5,
    ),
}

COMPOSITION_IDS: tuple[str, ...] = tuple(_COMPOSITIONS)
COMPOSITION_ALIASES = {f"F{24 + i}": cid for i, cid in enumerate(COMPOSITION_IDS)}


class Composition:
    """Weighted blend of ten shifted, stretched components with biases 0..900."""

    def __init__(
        self,
        components: list[Function],
        sigma: np.ndarray,
        lam: np.ndarray,
        optima: np.ndarray,
    ) -> None:
        self.components = components
        self.sigma = np.asarray(sigma, dtype=float)
        self.lam = np.asarray(lam, dtype=float)
        self.optima = np.asarray(optima, dtype=float)
        dim = self.optima.shape[1]
        self.fmax = np.array(
            [abs(fn(np.full(dim, 5.0) / lam_i)) for fn, lam_i in zip(components, self.lam)]
        )

    def weights(self, x: np.ndarray) -> np.ndarray:
        dim = x.size
        w = np.exp(-np.sum((x - self.optima) ** 2, axis=1) / (2.0 * dim * self.sigma**2))
        top = w.max()
        w = np.where(w == top, w, w * (1.0 - top**10))
        total = w.sum()
        if total == 0.0:
            return np.full(w.size, 1.0 / w.size)
        return w / total

    def __call__(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        fit = np.array(
            [
                _C * fn((x - o) / lam_i) / fmax
                for fn, o, lam_i, fmax in zip(self.components, self.optima, self.lam, self.fmax)
            ]
        )
        return float(np.sum(self.weights(x) * (fit + _BIAS)))


def composition_optima(problem_id: str) -> np.ndarray:
    """Component optima drawn once per id from a fixed seed."""
    index = COMPOSITION_IDS.index(problem_id)
    rng = make_rng(COMPOSITION_SEED + index)
    return rng.uniform(-5.0, 5.0, size=(10, COMPOSITION_DIM))


def make_composition(problem_id: str) -> Problem:
    if problem_id not in _COMPOSITIONS:
        raise ProblemError(f"Unknown composition id: {problem_id}")
    components, sigma, lam = _COMPOSITIONS[problem_id]
    fn = Composition(components, sigma, lam, composition_optima(problem_id))
    return Problem(
        name=problem_id,
        space=SearchSpace.box(-5.0, 5.0, COMPOSITION_DIM),
        raw_objective=fn,
        known_best=0.0,
        description="Composition of " + ", ".join(sorted({c.__name__ for c in components})),
    )
