"""Non-stationary benchmark scenarios and random instances.

The six named scenarios play linear costs f_t(x) = <c_t, x> on the ball of
radius 2 in R^16 for T = 5000 slots; every coordinate of c_t carries the same
value, listed below per slot.

    1  -1 for t <= 1000, then +1
    2  -1 on [1, 1000], [2000, 2500], [3500, 3750]; +1 otherwise
    3  -1 on [1, 1000], -5 on [2000, 2500], -10 on [3500, 3750]; +1 otherwise
    4  +1 / -1, switching every 50 slots (starting with +1)
    5  +1 / -0.1, switching every 50 slots (starting with +1)
    6  costs of scenario 4, predicted by c~_t = c_t - c_t / (0.1 t)

Scenarios 1-5 come with zero predictions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..geometry import Ball, FeasibleSet
from ..oracles import CostSpec

HORIZON = 5000
DIM = 16
RADIUS = 2.0
SCENARIO_IDS = (1, 2, 3, 4, 5, 6)
PREDICTION_MODES = ("default", "zero", "perfect")


def _ranges_value(t: int, ranges, default: float) -> float:
    for lo, hi, v in ranges:
        if lo <= t <= hi:
            return v
    return default


def _alternating(t: int, first: float, second: float, period: int = 50) -> float:
    return first if ((t - 1) // period) % 2 == 0 else second


def cost_value(scenario_id: int, t: int, horizon: int = HORIZON) -> float:
    """Common coordinate value of c_t."""
    if not 1 <= t <= horizon:
        raise ValueError(f"slot {t} outside [1, {horizon}]")
    if scenario_id == 1:
        return -1.0 if t <= 1000 else 1.0
    if scenario_id == 2:
        return _ranges_value(t, [(1, 1000, -1.0), (2000, 2500, -1.0), (3500, 3750, -1.0)], 1.0)
    if scenario_id == 3:
        return _ranges_value(t, [(1, 1000, -1.0), (2000, 2500, -5.0), (3500, 3750, -10.0)], 1.0)
    if scenario_id in (4, 6):
        return _alternating(t, 1.0, -1.0)
    if scenario_id == 5:
        return _alternating(t, 1.0, -0.1)
    raise ValueError(f"unknown scenario {scenario_id!r}")


def scenario_costs(scenario_id: int, t: int, dim: int = DIM, horizon: int = HORIZON) -> CostSpec:
    return CostSpec.linear(np.full(dim, cost_value(scenario_id, t, horizon)))


def scenario_prediction_coef(scenario_id: int, t: int, dim: int = DIM, horizon: int = HORIZON) -> np.ndarray:
    if scenario_id == 6:
        c = np.full(dim, cost_value(6, t, horizon))
        return c - c / (0.1 * t)
    cost_value(scenario_id, t, horizon)  # range check
    return np.zeros(dim)


@dataclass
class Scenario:
    """A fully materialized linear instance: cost rows C[t-1], prediction rows Ct[t-1]."""

    id: Union[int, str]
    feasible_set: FeasibleSet
    costs: np.ndarray
    predictions: np.ndarray
    seed: Optional[int] = None
    prediction_mode: str = "default"

    @property
    def horizon(self) -> int:
        return len(self.costs)

    @property
    def dim(self) -> int:
        return self.feasible_set.dim

    def cost(self, t: int) -> CostSpec:
        return CostSpec.linear(self.costs[t - 1])

    def prediction(self, t: int) -> CostSpec:
        """Prediction for slot t; slot T+1 (never played) gets the zero prediction."""
        if t == self.horizon + 1:
            return CostSpec.zero(self.dim)
        return CostSpec.linear(self.predictions[t - 1])

    def comparators(self) -> np.ndarray:
        return comparator_sequence(self)


def comparator_sequence(scenario: Scenario) -> np.ndarray:
    """Per-slot minimizers u_t = argmin_{x in X} <c_t, x>."""
    s = scenario.feasible_set
    if scenario.horizon == 0:
        return np.zeros((0, s.dim))
    return np.stack([s.linear_argmin(c) for c in scenario.costs])


def _apply_mode(costs: np.ndarray, predictions: np.ndarray, mode: str) -> np.ndarray:
    if mode == "default":
        return predictions
    if mode == "zero":
        return np.zeros_like(costs)
    if mode == "perfect":
        return costs.copy()
    raise ValueError(f"unknown prediction mode {mode!r}; choose one of {PREDICTION_MODES}")


def make_scenario(scenario_id: int, horizon: int = HORIZON, dim: int = DIM, radius: float = RADIUS,
                  prediction_mode: str = "default") -> Scenario:
    if scenario_id not in SCENARIO_IDS:
        raise ValueError(f"unknown scenario {scenario_id!r}")
    vals = np.array([cost_value(scenario_id, t, horizon) for t in range(1, horizon + 1)])
    costs = np.repeat(vals[:, None], dim, axis=1) if horizon else np.zeros((0, dim))
    if scenario_id == 6 and horizon:
        ts = np.arange(1, horizon + 1)[:, None]
        predictions = costs - costs / (0.1 * ts)
    else:
        predictions = np.zeros_like(costs)
    predictions = _apply_mode(costs, predictions, prediction_mode)
    return Scenario(scenario_id, Ball(radius, dim), costs, predictions, prediction_mode=prediction_mode)


def random_scenario(seed: int, horizon: int = 200, dim: int = 2, radius: float = 1.0, lipschitz: float = 1.0,
                    noise: Optional[float] = None, feasible_set: Optional[FeasibleSet] = None) -> Scenario:
    """i.i.d. costs uniform on the sphere of radius ``lipschitz``.

    ``noise=None`` gives zero predictions; otherwise predictions are the costs
    plus Gaussian noise of that standard deviation (0 means perfect).
    """
    rng = np.random.default_rng(seed)
    s = feasible_set if feasible_set is not None else Ball(radius, dim)
    d = s.dim
    z = rng.normal(size=(horizon, d))
    norms = np.linalg.norm(z, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    costs = lipschitz * z / norms
    if noise is None:
        predictions = np.zeros_like(costs)
        mode = "zero"
    else:
        predictions = costs + noise * rng.normal(size=costs.shape)
        mode = f"noise={noise:g}"
    return Scenario("random", s, costs, predictions, seed=seed, prediction_mode=mode)
