"""Optimistic Follow-the-Pruned-Leader.

The learner plays

    x_{t+1} = argmin_{x in X} <p_{1:t}, x> + (sigma_{1:t}/2)||x||^2 + f~_{t+1}(x)

where the state p_{1:t} aggregates p_t = g_t + g^I_t and g^I_t is a normal-cone
element chosen so that the state never outgrows the regularization: whenever
the unconstrained minimizer left the set, the history is replaced by the
element of the cone that cancels it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import regularizers as reg
from .geometry import FeasibleSet
from .oracles import CostSpec, PredictionSpec, prediction_error, subgradient
from .solver import minimize

STATE_BOUND_TOL = 1e-9
NORMAL_CONE_TOL = 1e-9
DELTA_TOL = 1e-12
DELTA_STEP_TOL = 1e-9

# first-slot pruning rules: "consistent" applies the t >= 2 rule with
# sigma_{1:0} = 0; "literal" prunes only when the first prediction is exact
FIRST_SLOT_RULES = ("consistent", "literal")


class InvariantViolation(AssertionError):
    pass


@dataclass
class LearnerState:
    p_cum: np.ndarray
    x_current: np.ndarray
    prediction: PredictionSpec
    sigma_cum: float = 0.0
    sigma_prev: float = 0.0
    E_cum: float = 0.0
    ppath_cum: float = 0.0
    delta_cum: float = 0.0
    uc_feasible: bool = False
    t: int = 1
    cadence: int = 1
    first_slot: str = "consistent"
    last_prune: Optional[int] = None
    last_comparator: Optional[np.ndarray] = None


@dataclass
class StepOutcome:
    x_next: np.ndarray
    pruned: bool
    g_I: np.ndarray
    epsilon: float
    sigma_t: float
    state_norm: float
    delta_t: Optional[float] = None
    g: np.ndarray = field(default=None, repr=False)
    g_pred: np.ndarray = field(default=None, repr=False)


def constrained_argmin(p_cum, sigma_cum: float, prediction: PredictionSpec, feasible_set: FeasibleSet,
                       x0=None) -> np.ndarray:
    """argmin over the set of <p, x> + (sigma/2)||x||^2 + prediction(x)."""
    if prediction.is_linear:
        return feasible_set.linear_quadratic_argmin(p_cum + prediction.coef, sigma_cum)
    return minimize(p_cum, sigma_cum, prediction, feasible_set, x0=x0)


def init(feasible_set: FeasibleSet, prediction_1: PredictionSpec, strategy: reg.StrategyConfig,
         cadence: int = 1, first_slot: str = "consistent") -> LearnerState:
    if prediction_1.dim != feasible_set.dim:
        raise ValueError(f"prediction dimension {prediction_1.dim} != set dimension {feasible_set.dim}")
    if cadence < 1:
        raise ValueError("prune cadence must be a positive integer")
    if first_slot not in FIRST_SLOT_RULES:
        raise ValueError(f"first_slot must be one of {FIRST_SLOT_RULES}")
    if not np.isclose(strategy.radius, feasible_set.radius, rtol=1e-12, atol=0.0):
        raise ValueError(f"strategy radius {strategy.radius} != set radius {feasible_set.radius}")
    d = feasible_set.dim
    x1 = constrained_argmin(np.zeros(d), 0.0, prediction_1, feasible_set)
    uc = unconstrained_iterate(np.zeros(d), 0.0, prediction_1)
    return LearnerState(
        p_cum=np.zeros(d),
        x_current=x1,
        prediction=prediction_1,
        uc_feasible=uc is not None and feasible_set.contains(uc),
        cadence=cadence,
        first_slot=first_slot,
    )


def prune_vector(p_cum_prev, g_pred_t, sigma_cum_prev: float, x_t) -> np.ndarray:
    return -(p_cum_prev + g_pred_t + sigma_cum_prev * x_t)


def delta_increment(state: LearnerState, p_t, feasible_set: FeasibleSet, g_t=None) -> float:
    """Realized gap of the regularized loss at x_t, for the recursive schedule.

    For t >= 2 this is h_{0:t-1}(x_t) + <p_t, x_t> minus its minimum over the
    set, with h_{0:t-1}(x) = <p_{1:t-1}, x> + (sigma_{1:t-1}/2)||x||^2. The first
    slot uses the raw gradient: <g_1, x_1> - min_x <g_1, x>.
    """
    x = state.x_current
    if state.t == 1:
        g = p_t if g_t is None else g_t
        delta = float(g @ x) - float(g @ feasible_set.linear_argmin(g))
    else:
        a = state.p_cum + p_t
        s = state.sigma_cum

        def h(y):
            return float(a @ y) + 0.5 * s * float(y @ y)

        delta = h(x) - h(feasible_set.linear_quadratic_argmin(a, s))
    if delta < -DELTA_TOL * max(1.0, abs(delta)):
        raise InvariantViolation(f"slot {state.t}: regularized-loss gap is negative ({delta:.3e})")
    return max(delta, 0.0)


def unconstrained_iterate(p_cum, sigma_cum: float, prediction: PredictionSpec):
    """Minimizer over all of R^d, or None when it does not exist."""
    if prediction.is_linear:
        if sigma_cum <= 0.0:
            return None
        return -(p_cum + prediction.coef) / sigma_cum
    return minimize(p_cum, sigma_cum, prediction)


def _sigma_increment(state: LearnerState, strategy: reg.StrategyConfig, eps: float, E_prev: float,
                     ppath_prev: float, delta_t: Optional[float]) -> float:
    R, t = strategy.radius, state.t
    if strategy.kind == reg.AGNOSTIC:
        return reg.sigma_agnostic(eps, E_prev, R, t)
    if strategy.kind == reg.KNOWN_PATH:
        return reg.sigma_known_path(eps, E_prev, R, strategy.path_budget, t)
    if strategy.kind == reg.OBSERVED_PATH:
        return reg.sigma_observed_path(eps, state.E_cum, E_prev, state.ppath_cum, ppath_prev, R, t)
    return reg.sigma_recursive(delta_t, R)


def observe_and_step(state: LearnerState, cost_t: CostSpec, prediction_next: PredictionSpec,
                     strategy: reg.StrategyConfig, feasible_set: FeasibleSet, comparator=None,
                     check_invariants: bool = False) -> StepOutcome:
    """Run one slot: observe f_t at x_t, prune, regularize and produce x_{t+1}.

    ``comparator`` is u_t, needed only by the observed-path schedule. Mutates
    ``state`` in place.
    """
    if cost_t.dim != feasible_set.dim or prediction_next.dim != feasible_set.dim:
        raise ValueError("cost/prediction dimension does not match the feasible set")
    t = state.t
    x_t = state.x_current
    R = feasible_set.radius

    g = subgradient(cost_t, x_t)
    g_pred = subgradient(state.prediction, x_t)
    eps = prediction_error(g, g_pred)

    prune_allowed = state.last_prune is None or t - state.last_prune >= state.cadence
    if t == 1 and state.first_slot == "literal":
        pruned = eps == 0.0
        g_I = -g if pruned else np.zeros_like(g)
    elif not state.uc_feasible and prune_allowed:
        pruned = True
        g_I = prune_vector(state.p_cum, g_pred, state.sigma_cum, x_t)
    else:
        pruned = False
        g_I = np.zeros_like(g)
    if pruned:
        state.last_prune = t
        if check_invariants:
            gap = feasible_set.normal_cone_gap(g_I, x_t)
            if gap > NORMAL_CONE_TOL:
                raise InvariantViolation(f"slot {t}: pruning vector leaves the normal cone (gap {gap:.3e})")
    p_t = g + g_I

    E_prev, ppath_prev = state.E_cum, state.ppath_cum
    state.E_cum = E_prev + eps * eps
    if strategy.kind == reg.OBSERVED_PATH:
        if comparator is None:
            raise ValueError("the observed-path schedule needs the comparator u_t at every slot")
        u = np.asarray(comparator, dtype=float)
        if state.last_comparator is None:
            state.ppath_cum = 2.0 * R
        else:
            state.ppath_cum = ppath_prev + float(np.linalg.norm(u - state.last_comparator))
        state.last_comparator = u

    delta_t = None
    if strategy.kind == reg.RECURSIVE:
        delta_t = delta_increment(state, p_t, feasible_set, g_t=g)
        if check_invariants:
            _check_delta_step(t, delta_t, eps, state.delta_cum, state.E_cum, R)
        state.delta_cum += delta_t

    sigma_t = _sigma_increment(state, strategy, eps, E_prev, ppath_prev, delta_t)
    if sigma_t < 0:
        raise InvariantViolation(f"slot {t}: negative regularization increment {sigma_t}")

    state.p_cum = state.p_cum + p_t
    state.sigma_prev = state.sigma_cum
    state.sigma_cum += sigma_t
    state_norm = float(np.linalg.norm(state.p_cum))
    # the bound needs every prune opportunity taken, including the first slot
    if check_invariants and state.cadence == 1 and not (t == 1 and state.first_slot == "literal"):
        bound = R * state.sigma_prev + eps
        if state_norm > bound + STATE_BOUND_TOL:
            raise InvariantViolation(
                f"slot {t}: state norm {state_norm:.12g} exceeds R*sigma_(1:t-1) + eps_t = {bound:.12g}")

    uc = unconstrained_iterate(state.p_cum, state.sigma_cum, prediction_next)
    state.uc_feasible = uc is not None and feasible_set.contains(uc)
    if state.uc_feasible:
        x_next = uc
    else:
        x_next = constrained_argmin(state.p_cum, state.sigma_cum, prediction_next, feasible_set, x0=x_t)
    if check_invariants and not feasible_set.contains(x_next):
        raise InvariantViolation(f"slot {t}: iterate x_{t + 1} is infeasible")

    state.x_current = x_next
    state.prediction = prediction_next
    state.t = t + 1
    return StepOutcome(x_next=x_next, pruned=pruned, g_I=g_I, epsilon=eps, sigma_t=sigma_t,
                       state_norm=state_norm, delta_t=delta_t, g=g, g_pred=g_pred)


def _check_delta_step(t: int, delta_t: float, eps: float, delta_prev: float, E_t: float, R: float):
    cap = 2.0 * R * eps
    if delta_prev > 0:
        cap = min(cap, 4.0 * R * R * eps * eps / delta_prev)
    if delta_t > cap + DELTA_STEP_TOL:
        raise InvariantViolation(f"slot {t}: delta_t = {delta_t:.12g} exceeds its per-step cap {cap:.12g}")
    ceiling = 2.0 * math.sqrt(3.0) * R * math.sqrt(E_t)
    if delta_prev + delta_t > ceiling + DELTA_STEP_TOL:
        raise InvariantViolation(
            f"slot {t}: delta_(1:t) = {delta_prev + delta_t:.12g} exceeds 2*sqrt(3)*R*sqrt(E_t) = {ceiling:.12g}")


class OptFPRL:
    """Object wrapper around :func:`init` / :func:`observe_and_step`."""

    name = "optfprl"

    def __init__(self, feasible_set: FeasibleSet, strategy: reg.StrategyConfig, first_prediction: PredictionSpec,
                 cadence: int = 1, first_slot: str = "consistent", check_invariants: bool = True):
        self.set = feasible_set
        self.strategy = strategy
        self.check_invariants = check_invariants
        self.state = init(feasible_set, first_prediction, strategy, cadence=cadence, first_slot=first_slot)

    @property
    def x(self) -> np.ndarray:
        return self.state.x_current

    def step(self, cost: CostSpec, next_prediction: PredictionSpec, comparator=None) -> StepOutcome:
        return observe_and_step(self.state, cost, next_prediction, self.strategy, self.set,
                                comparator=comparator, check_invariants=self.check_invariants)
