"""Constrained engineering design problems and the exhaustive clutch-brake oracle."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import ProblemError, SearchSpace
from .problems import GREATER_EQUAL, LESS_EQUAL, Constraint, PenaltyPolicy, Problem

logger = logging.getLogger(__name__)

ENGINEERING_IDS: tuple[str, ...] = (
    "clutch_brake",
    "robot_gripper",
    "rolling_bearing",
    "thrust_bearing",
    "belleville",
    "step_cone",
    "speed_reducer",
)


def _constraints(
    terms: Callable[[np.ndarray], dict[str, float]], names: list[str], sense: str = GREATER_EQUAL
) -> tuple[Constraint, ...]:
    """One Constraint per named entry of a shared term function."""

    def pick(name: str) -> Callable[[np.ndarray], float]:
        return lambda x: float(terms(x)[name])

    return tuple(Constraint(name, pick(name), sense) for name in names)


# ---------------------------------------------------------------------------
# Multiple disc clutch brake
# ---------------------------------------------------------------------------

CLUTCH_SETS = (
    np.arange(60.0, 81.0),
    np.arange(90.0, 111.0),
    np.array([1.0, 1.5, 2.0, 2.5, 3.0]),
    np.arange(600.0, 1001.0, 10.0),
    np.arange(2.0, 10.0),
)


def clutch_terms(ri, ro, t, force, z):
    """Objective and g1..g8 of the clutch brake; works on scalars or broadcast arrays."""
    area = ro**2 - ri**2
    cube = ro**3 - ri**3
    prz = force / (np.pi * area)
    vsr = 2.0 * np.pi * 250.0 * cube / (90.0 * area) / 1000.0
    mh = (2.0 / 3.0) * 0.5 * force * z * cube / area / 1000.0
    torque = 55.0 * np.pi * 250.0 / (30.0 * (mh + 3.0))
    return {
        "f": np.pi * area * t * (z + 1.0) * 7.8e-6,
        "g1": ro - ri - 20.0,
        "g2": 30.0 - (z + 1.0) * (t + 0.5),
        "g3": 1.0 - prz,
        "g4": 1.0 * 10.0 - prz * vsr,
        "g5": 10.0 - vsr,
        "g6": 15.0 - torque,
        "g7": mh - 1.5 * 40.0,
        "g8": torque,
    }


def _clutch(x: np.ndarray) -> dict[str, float]:
    return clutch_terms(*x)


def clutch_brake() -> Problem:
    space = SearchSpace(
        lower=[60.0, 90.0, 1.0, 600.0, 2.0],
        upper=[80.0, 110.0, 3.0, 1000.0, 9.0],
        discrete_sets=CLUTCH_SETS,
    )
    return Problem(
        name="clutch_brake",
        space=space,
        raw_objective=lambda x: float(_clutch(x)["f"]),
        inequalities=_constraints(_clutch, [f"g{i}" for i in range(1, 9)]),
        known_best=0.313657,
        reference_nfe=1200,
        description="Multiple disc clutch brake (ri, ro, t, F, Z), all discrete",
    )


@dataclass
class OracleResult:
    best_x: np.ndarray
    best_f: float
    feasible: int
    grid_size: int


def brute_force_clutch(policy: Optional[PenaltyPolicy] = None) -> OracleResult:
    """Evaluate every combination of the clutch-brake sets and keep the feasible minimizer."""
    policy = policy or PenaltyPolicy()
    grids = np.meshgrid(*CLUTCH_SETS, indexing="ij")
    flat = [g.ravel() for g in grids]
    terms = clutch_terms(*flat)
    violation = np.zeros(flat[0].size)
    for i in range(1, 9):
        violation += np.maximum(0.0, -terms[f"g{i}"])
    feasible = violation == 0.0
    if not feasible.any():
        raise ProblemError("no feasible clutch-brake design on the grid")
    penalized = np.where(feasible, terms["f"], terms["f"] + policy.rho * violation)
    # argmin returns the first minimizer in C order, so ties resolve deterministically.
    index = int(np.argmin(np.where(feasible, penalized, np.inf)))
    best_x = np.array([g[index] for g in flat])
    logger.debug("clutch oracle: %d of %d grid points feasible", feasible.sum(), feasible.size)
    return OracleResult(
        best_x=best_x,
        best_f=float(terms["f"][index]),
        feasible=int(feasible.sum()),
        grid_size=int(feasible.size),
    )


# ---------------------------------------------------------------------------
# Robot gripper
# ---------------------------------------------------------------------------

GRIPPER_Z_SAMPLES = 200
_Y_MIN, _Y_MAX, _Y_G, _Z_MAX, _P = 50.0, 100.0, 150.0, 100.0, 100.0


def _gripper_geometry(x: np.ndarray, z: np.ndarray):
    a, b, c, e, f, l, delta = x
    d = np.sqrt((l - z) ** 2 + e**2)
    phi = np.arctan2(e, l - z)
    arg_alpha = (a**2 + d**2 - b**2) / (2.0 * a * d)
    arg_beta = (b**2 + d**2 - a**2) / (2.0 * b * d)
    alpha = np.arccos(np.clip(arg_alpha, -1.0, 1.0)) + phi
    beta = np.arccos(np.clip(arg_beta, -1.0, 1.0)) - phi
    force = _P * b * np.sin(alpha + beta) / (2.0 * c * np.cos(alpha))
    y = 2.0 * (e + f + c * np.sin(beta + delta))
    excess = np.maximum(0.0, np.abs(arg_alpha) - 1.0).max() + np.maximum(
        0.0, np.abs(arg_beta) - 1.0
    ).max()
    return force, y, float(excess)


def _gripper_force_range(x: np.ndarray) -> float:
    z = np.linspace(0.0, _Z_MAX, GRIPPER_Z_SAMPLES)
    force, _, _ = _gripper_geometry(x, z)
    return float(np.max(force) - np.min(force))


def _gripper(x: np.ndarray) -> dict[str, float]:
    a, b, c, e, f, l, delta = x
    _, y, _ = _gripper_geometry(x, np.array([0.0, _Z_MAX]))
    y0, yz = y

    def reach(z: float) -> float:
        return float(np.sqrt((l - z) ** 2 + e**2))

    return {
        "g1": _Y_MIN - yz,
        "g2": yz,
        "g3": y0 - _Y_MAX,
        "g4": _Y_G - y0,
        "g5": (a + b) ** 2 - l**2 - e**2,
        "g6": (l - _Z_MAX) ** 2 + (a - e) ** 2 - b**2,
        "g7": l - _Z_MAX,
        "g8": reach(_Z_MAX) + b - a,
        "g9": reach(0.0) + b - a,
        "g10": b + a - reach(0.0),
    }


def _gripper_invalid_geometry(x: np.ndarray) -> float:
    z = np.linspace(0.0, _Z_MAX, GRIPPER_Z_SAMPLES)
    return _gripper_geometry(x, z)[2]


def robot_gripper() -> Problem:
    return Problem(
        name="robot_gripper",
        space=SearchSpace(
            lower=[10.0, 10.0, 100.0, 0.0, 10.0, 100.0, 1.0],
            upper=[150.0, 150.0, 200.0, 50.0, 150.0, 300.0, 3.14],
        ),
        raw_objective=_gripper_force_range,
        inequalities=_constraints(_gripper, [f"g{i}" for i in range(1, 11)]),
        extra_violation=_gripper_invalid_geometry,
        known_best=4.91124796,
        reference_nfe=36000,
        description="Robot gripper (a, b, c, e, f, l, delta); force range over z in [0, 100]",
    )


# ---------------------------------------------------------------------------
# Rolling element bearing
# ---------------------------------------------------------------------------

_BEARING_D, _BEARING_d, _BEARING_BW = 160.0, 90.0, 30.0


def _bearing_capacity(x: np.ndarray) -> float:
    dm, db, z, fi, fo = x[:5]
    gamma = db / dm
    ratio = (1.0 - gamma) / (1.0 + gamma)
    conformity = (fi * (2.0 * fo - 1.0)) / (fo * (2.0 * fi - 1.0))
    fc = (
        37.91
        * (1.0 + (1.04 * ratio**1.72 * conformity**0.41) ** (10.0 / 3.0)) ** -0.3
        * gamma**0.3
        * (1.0 - gamma) ** 1.39
        / (1.0 + gamma) ** (1.0 / 3.0)
        * (2.0 * fi / (2.0 * fi - 1.0)) ** 0.41
    )
    if db <= 25.4:
        return float(fc * z ** (2.0 / 3.0) * db**1.8)
    return float(3.64 * fc * z ** (2.0 / 3.0) * db**1.4)


def _bearing(x: np.ndarray) -> dict[str, float]:
    dm, db, z, fi, fo, kd_min, kd_max, eps, e, zeta = x
    big, small, bw = _BEARING_D, _BEARING_d, _BEARING_BW
    t = big - small - 2.0 * db
    u = (big - small) / 2.0 - 3.0 * t / 4.0
    v = big / 2.0 - t / 4.0 - db
    w = small / 2.0 + t / 4.0
    cos_arg = (u**2 + v**2 - w**2) / (2.0 * u * v)
    phi_o = 2.0 * np.pi - 2.0 * np.arccos(np.clip(cos_arg, -1.0, 1.0))
    return {
        "g1": phi_o / (2.0 * np.arcsin(db / dm)) - z + 1.0,
        "g2": 2.0 * db - kd_min * (big - small),
        "g3": kd_max * (big - small) - 2.0 * db,
        "g4": zeta * bw - db,
        "g5": dm - 0.5 * (big + small),
        "g6": (0.5 + e) * (big + small) - dm,
        "g7": 0.5 * (big - dm - db) - eps * db,
        "g8": fi - 0.515,
        "g9": fo - 0.515,
    }


def rolling_bearing() -> Problem:
    lower = [125.0, 10.5, 4.0, 0.515, 0.515, 0.4, 0.6, 0.3, 0.02, 0.6]
    upper = [150.0, 31.5, 50.0, 0.6, 0.6, 0.5, 0.7, 0.4, 0.1, 0.85]
    sets: list[Optional[np.ndarray]] = [None] * 10
    sets[2] = np.arange(4.0, 51.0)
    ge = [f"g{i}" for i in (1, 2, 3, 5, 6, 7, 8, 9)]
    inequalities = _constraints(_bearing, ge) + _constraints(_bearing, ["g4"], LESS_EQUAL)
    return Problem(
        name="rolling_bearing",
        space=SearchSpace(lower=lower, upper=upper, discrete_sets=tuple(sets)),
        raw_objective=_bearing_capacity,
        inequalities=tuple(sorted(inequalities, key=lambda c: int(c.name[1:]))),
        known_best=81859.7415,
        maximize=True,
        reference_nfe=16000,
        description="Rolling element bearing, maximize dynamic load capacity Cd (Z integer)",
    )


# ---------------------------------------------------------------------------
# Hydrostatic thrust bearing
# ---------------------------------------------------------------------------

_TB = dict(
    gamma=0.0307, c=0.5, n=-3.55, c1=10.04, ws=101000.0, pmax=1000.0,
    dt_max=50.0, h_min=0.001, g=386.4, speed=750.0,
)
_TB_FLOOR = 1e-12


def _thrust(x: np.ndarray) -> dict[str, float]:
    r, r0, mu, q = x
    k = _TB
    p = (np.log10(np.log10(8.122e6 * mu + 0.8)) - k["c1"]) / k["n"]
    delta_t = 2.0 * (10.0**p - 560.0)
    ef = 9336.0 * q * k["gamma"] * k["c"] * delta_t
    h_raw = (
        (2.0 * np.pi * k["speed"] / 60.0) ** 2 * 2.0 * np.pi * mu / ef * (r**4 / 4.0 - r0**4 / 4.0)
    )
    # R <= R0 is infeasible through g4/g5; the floors keep the remaining terms finite there.
    h = max(h_raw, _TB_FLOOR)
    log_ratio = max(np.log(r / r0), _TB_FLOOR)
    p0 = 6.0 * mu * q / (np.pi * h**3) * log_ratio
    load = np.pi * p0 / 2.0 * (r**2 - r0**2) / log_ratio
    return {
        "f": (q * p0 / 0.7 + ef) / 12.0,
        "g1": load - k["ws"],
        "g2": k["pmax"] - p0,
        "g3": k["dt_max"] - delta_t,
        "g4": h_raw - k["h_min"],
        "g5": r - r0,
        "g6": 0.001 - k["gamma"] / (k["g"] * p0) * (q / (2.0 * np.pi * r * h)) ** 2,
        "g7": 5000.0 - p0 / (2.0 * log_ratio),
    }


def thrust_bearing() -> Problem:
    return Problem(
        name="thrust_bearing",
        space=SearchSpace(lower=[1.0, 1.0, 1e-6, 1.0], upper=[16.0, 16.0, 16e-6, 16.0]),
        raw_objective=lambda x: float(_thrust(x)["f"]),
        inequalities=_constraints(_thrust, [f"g{i}" for i in range(1, 8)]),
        known_best=1625.443,
        reference_nfe=48000,
        description="Hydrostatic thrust bearing (R, R0, mu, Q), minimize power loss",
    )


# ---------------------------------------------------------------------------
# Belleville spring
# ---------------------------------------------------------------------------

_BELLEVILLE_STEPS = {
    1.5: 0.85, 1.6: 0.77, 1.7: 0.71, 1.8: 0.66, 1.9: 0.63, 2.0: 0.6,
    2.1: 0.58, 2.2: 0.56, 2.3: 0.55, 2.4: 0.53, 2.5: 0.52, 2.6: 0.51, 2.7: 0.51,
}


def belleville_f_of_a(a: float) -> float:
    """Step lookup of the load-deflection factor, with a rounded to one decimal."""
    key = round(float(a), 1)
    if key <= 1.4:
        return 1.0
    if key >= 2.8:
        return 0.5
    return _BELLEVILLE_STEPS[key]


_BV = dict(p_max=5400.0, delta_max=0.2, s=200000.0, e=30e6, mu=0.3, h=2.0, d_max=12.01)
_BV_FLOOR = 1e-9


def _belleville(x: np.ndarray) -> dict[str, float]:
    t, h, di, de = x
    k = _BV
    # De <= Di is infeasible through g6; the floors keep the remaining terms finite there.
    ratio = max(de / di, 1.0 + _BV_FLOOR)
    gap = max(de - di, _BV_FLOOR)
    log_k = np.log(ratio)
    scale = 6.0 / (np.pi * log_k)
    alpha = scale * ((ratio - 1.0) / ratio) ** 2
    beta = scale * ((ratio - 1.0) / log_k - 1.0)
    gamma = scale * (ratio - 1.0) / 2.0
    dm = k["delta_max"]
    coef = 4.0 * k["e"] * dm / ((1.0 - k["mu"] ** 2) * alpha * de**2)
    return {
        "g1": k["s"] - coef * (beta * (h - dm / 2.0) + gamma * t),
        "g2": coef * ((h - dm / 2.0) * (h - dm) * t + t**3) - k["p_max"],
        "g3": belleville_f_of_a(h / t) * h - dm,
        "g4": k["h"] - h - t,
        "g5": k["d_max"] - de,
        "g6": de - di,
        "g7": 0.3 - h / gap,
    }


def belleville() -> Problem:
    return Problem(
        name="belleville",
        space=SearchSpace(lower=[0.01, 0.05, 5.0, 5.0], upper=[6.0, 0.5, 15.0, 15.0]),
        raw_objective=lambda x: float(0.07075 * np.pi * (x[3] ** 2 - x[2] ** 2) * x[0]),
        inequalities=_constraints(_belleville, [f"g{i}" for i in range(1, 8)]),
        known_best=1.9807,
        reference_nfe=24000,
        description="Belleville spring (t, h, Di, De), minimize weight",
    )


# ---------------------------------------------------------------------------
# Step-cone pulley
# ---------------------------------------------------------------------------

_SPEEDS = np.array([750.0, 450.0, 250.0, 150.0])
_SC = dict(rho=7200.0, a=3.0, mu=0.35, s=1.75e6, t=8e-3, n=350.0, hp=0.75 * 745.6998)


def _step_cone_terms(x: np.ndarray):
    d = np.asarray(x[:4], dtype=float) / 1000.0
    w = float(x[4]) / 1000.0
    k = _SC
    ratio = _SPEEDS / k["n"]
    length = (
        np.pi * d / 2.0 * (1.0 + ratio) + (ratio - 1.0) ** 2 * d**2 / (4.0 * k["a"]) + 2.0 * k["a"]
    )
    theta = np.pi - 2.0 * np.arcsin(np.clip((ratio - 1.0) * d / (2.0 * k["a"]), -1.0, 1.0))
    tension = np.exp(k["mu"] * theta)
    power = k["s"] * k["t"] * w * (1.0 - np.exp(-k["mu"] * theta)) * np.pi * d * _SPEEDS / 60.0
    weight = k["rho"] * w * np.sum(d**2 * (1.0 + ratio**2))
    return weight, length, tension, power


def _step_cone(x: np.ndarray) -> dict[str, float]:
    _, length, tension, power = _step_cone_terms(x)
    terms = {f"h{i}": length[0] - length[i] for i in range(1, 4)}
    terms.update({f"g{i + 1}": tension[i] - 2.0 for i in range(4)})
    terms.update({f"g{i + 5}": power[i] - _SC["hp"] for i in range(4)})
    return terms


def step_cone() -> Problem:
    return Problem(
        name="step_cone",
        space=SearchSpace.box(1.0, 100.0, 5),
        raw_objective=lambda x: float(_step_cone_terms(x)[0]),
        inequalities=_constraints(_step_cone, [f"g{i}" for i in range(1, 9)]),
        equalities=_constraints(_step_cone, ["h1", "h2", "h3"]),
        known_best=19.1331,
        reference_nfe=72000,
        description="Step-cone pulley (d1..d4, w in mm), minimize weight",
    )


# ---------------------------------------------------------------------------
# Speed reducer
# ---------------------------------------------------------------------------

def _speed_reducer_weight(x: np.ndarray) -> float:
    x1, x2, x3, x4, x5, x6, x7 = x
    return float(
        0.7854 * x1 * x2**2 * (3.3333 * x3**2 + 14.9334 * x3 - 43.0934)
        - 1.508 * x1 * (x6**2 + x7**2)
        + 7.4777 * (x6**3 + x7**3)
        + 0.7854 * (x4 * x6**2 + x5 * x7**2)
    )


def _speed_reducer(x: np.ndarray) -> dict[str, float]:
    x1, x2, x3, x4, x5, x6, x7 = x
    return {
        "g1": 27.0 / (x1 * x2**2 * x3) - 1.0,
        "g2": 397.5 / (x1 * x2**2 * x3**2) - 1.0,
        "g3": 1.93 * x4**3 / (x2 * x3 * x6**4) - 1.0,
        "g4": 1.93 * x5**3 / (x2 * x3 * x7**4) - 1.0,
        "g5": np.sqrt((745.0 * x4 / (x2 * x3)) ** 2 + 16.9e6) / (110.0 * x6**3) - 1.0,
        "g6": np.sqrt((745.0 * x5 / (x2 * x3)) ** 2 + 157.5e6) / (85.0 * x7**3) - 1.0,
        "g7": x2 * x3 / 40.0 - 1.0,
        "g8": 5.0 * x2 / x1 - 1.0,
        "g9": x1 / (12.0 * x2) - 1.0,
        "g10": (1.5 * x6 + 1.9) / x4 - 1.0,
        "g11": (1.1 * x7 + 1.9) / x5 - 1.0,
    }


def speed_reducer() -> Problem:
    return Problem(
        name="speed_reducer",
        space=SearchSpace(
            lower=[2.6, 0.7, 17.0, 7.3, 7.3, 2.9, 5.0],
            upper=[3.6, 0.8, 28.0, 8.3, 8.3, 3.9, 5.5],
        ),
        raw_objective=_speed_reducer_weight,
        inequalities=_constraints(_speed_reducer, [f"g{i}" for i in range(1, 12)], LESS_EQUAL),
        known_best=2994.5735,
        reference_nfe=32000,
        description="Speed reducer (face width, module, teeth, shaft lengths and diameters)",
    )


_BUILDERS: dict[str, Callable[[], Problem]] = {
    "clutch_brake": clutch_brake,
    "robot_gripper": robot_gripper,
    "rolling_bearing": rolling_bearing,
    "thrust_bearing": thrust_bearing,
    "belleville": belleville,
    "step_cone": step_cone,
    "speed_reducer": speed_reducer,
}


def make_engineering(problem_id: str) -> Problem:
    try:
        return _BUILDERS[problem_id]()
    except KeyError:
        raise ProblemError(f"Unknown engineering problem: {problem_id}") from None
