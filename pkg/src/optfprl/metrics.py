"""Dynamic-regret accounting and evaluable regret bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import regularizers as reg

BOUND_TOL = 1e-6


@dataclass
class Trace:
    """Per-slot log of one run. Columns are parallel lists of length T."""

    radius: float
    algo: str = "optfprl"
    strategy: str = ""
    x: list = field(default_factory=list)
    comparators: list = field(default_factory=list)
    loss: list = field(default_factory=list)
    comparator_loss: list = field(default_factory=list)
    epsilon: list = field(default_factory=list)
    sigma: list = field(default_factory=list)
    sigma_cum: list = field(default_factory=list)
    state_norm: list = field(default_factory=list)
    delta: list = field(default_factory=list)
    pruned: list = field(default_factory=list)

    def record(self, x, u, loss, comparator_loss, epsilon, sigma=0.0, sigma_cum=0.0, state_norm=0.0,
               delta=None, pruned=False):
        if epsilon < 0:
            raise ValueError("prediction error must be nonnegative")
        self.x.append(np.asarray(x, dtype=float))
        self.comparators.append(np.asarray(u, dtype=float))
        self.loss.append(float(loss))
        self.comparator_loss.append(float(comparator_loss))
        self.epsilon.append(float(epsilon))
        self.sigma.append(float(sigma))
        self.sigma_cum.append(float(sigma_cum))
        self.state_norm.append(float(state_norm))
        self.delta.append(None if delta is None else float(delta))
        self.pruned.append(bool(pruned))

    def __len__(self):
        return len(self.loss)

    def regret_increments(self) -> np.ndarray:
        return np.asarray(self.loss, dtype=float) - np.asarray(self.comparator_loss, dtype=float)

    def regret_curve(self) -> np.ndarray:
        return np.cumsum(self.regret_increments())

    def average_regret_curve(self) -> np.ndarray:
        return self.regret_curve() / np.arange(1, len(self) + 1)


@dataclass
class MetricsReport:
    regret_cum: float
    P_T: float
    E_T: float
    H_T: float
    A_T: float
    bound_value: Optional[float] = None
    bound_satisfied: Optional[bool] = None

    def as_dict(self) -> dict:
        return {
            "regret_cum": self.regret_cum, "P_T": self.P_T, "E_T": self.E_T, "H_T": self.H_T,
            "A_T": self.A_T, "bound_value": self.bound_value, "bound_satisfied": self.bound_satisfied,
        }


def dynamic_regret(trace: Trace) -> float:
    return float(np.sum(trace.regret_increments()))


def path_increments(comparators) -> np.ndarray:
    """||u_{t+1} - u_t|| for t = 1..T-1."""
    U = np.asarray(comparators, dtype=float)
    if len(U) < 2:
        return np.zeros(0)
    return np.linalg.norm(np.diff(U.reshape(len(U), -1), axis=0), axis=1)


def path_length(comparators) -> float:
    return float(np.sum(path_increments(comparators)))


def pred_energy_and_hybrid(trace: Trace) -> tuple[float, float]:
    eps = np.asarray(trace.epsilon, dtype=float)
    steps = path_increments(trace.comparators)
    return float(np.sum(eps * eps)), float(np.sum(eps[:-1] * steps)) if len(eps) > 1 else 0.0


def augmented_path_series(comparators, R: float) -> np.ndarray:
    """P'_t = 2R + sum_{tau < t} ||u_{tau+1} - u_tau||, for t = 1..T."""
    steps = path_increments(comparators)
    return 2.0 * R + np.concatenate([[0.0], np.cumsum(steps)])


def corrective_a(trace: Trace) -> float:
    """The penalty for a non-monotone sqrt(E_t / P'_t) estimate.

    A_T = sum_t ||u_{t+1} - u_t|| * sum_{tau in [t]+} (r_{tau-1} - r_tau), where
    r_t = sqrt(E_t / P'_t) and [t]+ = {2 <= tau <= t : r_{tau-1} >= r_tau}.
    """
    if len(trace) < 2:
        return 0.0
    eps = np.asarray(trace.epsilon, dtype=float)
    E = np.cumsum(eps * eps)
    P = augmented_path_series(trace.comparators, trace.radius)
    return corrective_sum(np.sqrt(E / P), path_increments(trace.comparators))


def corrective_sum(r, steps) -> float:
    """sum_t steps[t-1] * sum_{tau in [t]+} (r_{tau-1} - r_tau) with 1-based r and steps."""
    r = np.asarray(r, dtype=float)
    steps = np.asarray(steps, dtype=float)
    if len(r) < 2:
        return 0.0
    drops = np.maximum(r[:-1] - r[1:], 0.0)   # drops[k] is the tau = k+2 term
    inner = np.concatenate([[0.0], np.cumsum(drops)])  # inner[t-1] sums tau = 2..t
    return float(np.sum(inner[:len(steps)] * steps))


def theorem_bound(trace: Trace, strategy: reg.StrategyConfig) -> float:
    """Right-hand side of the regret guarantee that matches ``strategy``.

    Uses the measured path length of the trace's comparators.
    """
    if trace.strategy and trace.strategy != strategy.kind:
        raise ValueError(f"trace was produced with strategy {trace.strategy!r}, not {strategy.kind!r}")
    R = strategy.radius
    P_T = path_length(trace.comparators)
    E_T, H_T = pred_energy_and_hybrid(trace)
    sE = math.sqrt(E_T)
    if strategy.kind == reg.AGNOSTIC:
        return (5.8 * R + 0.5 * P_T) * sE + H_T
    if strategy.kind == reg.KNOWN_PATH:
        return (4.0 * math.sqrt(2.0 * R * R + P_T) + R / 8.0 + math.sqrt(R * P_T / 2.0)) * sE + H_T
    if strategy.kind == reg.OBSERVED_PATH:
        return 5.5 * math.sqrt(R) * math.sqrt(E_T * (2.0 * R + P_T)) + H_T + math.sqrt(R / 2.0) * corrective_a(trace)
    if any(d is None for d in trace.delta):
        raise ValueError("the recursive-strategy bound needs the per-slot delta series")
    delta_cum = np.cumsum(np.asarray(trace.delta, dtype=float))
    if len(delta_cum) == 0:
        return H_T
    steps = path_increments(trace.comparators)
    return 1.1 * float(delta_cum[-1]) + float(np.sum(delta_cum[:-1] * steps)) / (4.0 * R) + H_T


def report(trace: Trace, strategy: Optional[reg.StrategyConfig] = None) -> MetricsReport:
    E_T, H_T = pred_energy_and_hybrid(trace)
    rep = MetricsReport(
        regret_cum=dynamic_regret(trace),
        P_T=path_length(trace.comparators),
        E_T=E_T,
        H_T=H_T,
        A_T=corrective_a(trace),
    )
    if strategy is not None:
        rep.bound_value = theorem_bound(trace, strategy)
        rep.bound_satisfied = rep.regret_cum <= rep.bound_value + BOUND_TOL
    return rep
