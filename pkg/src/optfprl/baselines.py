"""Comparison learners: AdaGrad-tuned lazy FTRL and greedy OGD, plus optimistic versions.

Constants follow the usual diameter-tuned recipes for a set of radius R:
FTRL uses sigma_{1:t} = (sqrt(2)/(2R)) * sqrt(G_t) and OGD uses
eta_t = sqrt(2) * R / sqrt(G_t), where G_t sums squared gradients (or squared
prediction errors for the optimistic variants). Both are overridable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import FeasibleSet

FTRL = "ftrl-adaptive"
OGD = "ogd-adaptive"
OPT_FTRL = "optimistic-ftrl"
OPT_OGD = "optimistic-ogd"
KINDS = (FTRL, OGD, OPT_FTRL, OPT_OGD)


def default_ftrl_scale(R: float) -> float:
    return math.sqrt(2.0) / (2.0 * R)


def default_ogd_scale(R: float) -> float:
    return math.sqrt(2.0) * R


@dataclass
class BaselineState:
    kind: str
    x_current: np.ndarray
    g_cum: np.ndarray
    grad_energy: float = 0.0
    t: int = 1
    scale: Optional[float] = None

    @property
    def is_optimistic(self) -> bool:
        return self.kind in (OPT_FTRL, OPT_OGD)


def init(kind: str, feasible_set: FeasibleSet, first_pred_grad=None, scale: Optional[float] = None) -> BaselineState:
    """Fresh state at x_1.

    Non-optimistic learners and optimistic OGD start at the origin; optimistic
    FTRL starts at the minimizer of the first prediction (its zero-energy rule).
    """
    if kind not in KINDS:
        raise ValueError(f"unknown baseline {kind!r}; choose one of {KINDS}")
    d = feasible_set.dim
    R = feasible_set.radius
    if scale is None:
        scale = default_ftrl_scale(R) if kind in (FTRL, OPT_FTRL) else default_ogd_scale(R)
    x1 = np.zeros(d)
    if kind == OPT_FTRL and first_pred_grad is not None:
        x1 = feasible_set.linear_argmin(first_pred_grad)
    return BaselineState(kind=kind, x_current=x1, g_cum=np.zeros(d), scale=scale)


def _advance(state: BaselineState, x_next: np.ndarray) -> np.ndarray:
    state.x_current = x_next
    state.t += 1
    return x_next


def _require(state: BaselineState, kind: str):
    if state.kind != kind:
        raise ValueError(f"state of kind {state.kind!r} passed to the {kind} step")


def ftrl_adaptive_step(state: BaselineState, g_t, feasible_set: FeasibleSet) -> np.ndarray:
    _require(state, FTRL)
    g_t = np.asarray(g_t, dtype=float)
    state.g_cum = state.g_cum + g_t
    state.grad_energy += float(g_t @ g_t)
    if state.grad_energy == 0.0:
        return _advance(state, np.zeros(feasible_set.dim))
    sigma = state.scale * math.sqrt(state.grad_energy)
    return _advance(state, feasible_set.project(-state.g_cum / sigma))


def ogd_adaptive_step(state: BaselineState, g_t, feasible_set: FeasibleSet) -> np.ndarray:
    _require(state, OGD)
    g_t = np.asarray(g_t, dtype=float)
    state.grad_energy += float(g_t @ g_t)
    if state.grad_energy == 0.0:
        return _advance(state, state.x_current)
    eta = state.scale / math.sqrt(state.grad_energy)
    return _advance(state, feasible_set.project(state.x_current - eta * g_t))


def optimistic_ftrl_step(state: BaselineState, g_t, g_pred_t, g_pred_next, feasible_set: FeasibleSet) -> np.ndarray:
    """Optimistic FTRL; ``g_pred_t`` is the prediction gradient at x_t, used for eps_t."""
    _require(state, OPT_FTRL)
    g_t = np.asarray(g_t, dtype=float)
    g_pred_next = np.asarray(g_pred_next, dtype=float)
    state.g_cum = state.g_cum + g_t
    err = g_t - np.asarray(g_pred_t, dtype=float)
    state.grad_energy += float(err @ err)
    if state.grad_energy == 0.0:
        return _advance(state, feasible_set.linear_argmin(g_pred_next))
    sigma = state.scale * math.sqrt(state.grad_energy)
    return _advance(state, feasible_set.project(-(state.g_cum + g_pred_next) / sigma))


def optimistic_ogd_step(state: BaselineState, g_t, g_pred_t, g_pred_next, feasible_set: FeasibleSet) -> np.ndarray:
    """One-step optimistic OGD: x <- P(x - eta (g_t - g~_t + g~_{t+1}))."""
    _require(state, OPT_OGD)
    g_t = np.asarray(g_t, dtype=float)
    g_pred_t = np.asarray(g_pred_t, dtype=float)
    err = g_t - g_pred_t
    state.grad_energy += float(err @ err)
    if state.grad_energy == 0.0:
        return _advance(state, state.x_current)
    eta = state.scale / math.sqrt(state.grad_energy)
    direction = err + np.asarray(g_pred_next, dtype=float)
    return _advance(state, feasible_set.project(state.x_current - eta * direction))
