"""Experiment runner: drives a learner through a scenario and records the trace."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from .. import baselines as bl
from .. import metrics
from ..learner import InvariantViolation, OptFPRL
from ..oracles import subgradient
from ..regularizers import AGNOSTIC, KNOWN_PATH, STRATEGIES, StrategyConfig
from .scenarios import DIM, HORIZON, RADIUS, SCENARIO_IDS, Scenario, make_scenario, random_scenario

ALGOS = {
    "optfprl": "optfprl",
    "ftrl": bl.FTRL,
    "ogd": bl.OGD,
    "opt-ftrl": bl.OPT_FTRL,
    "opt-ogd": bl.OPT_OGD,
}


@dataclass(frozen=True)
class RunConfig:
    scenario: Union[int, str] = 1
    algo: str = "optfprl"
    strategy: str = AGNOSTIC
    path_budget: Optional[float] = None
    cadence: int = 1
    horizon: Optional[int] = None
    dim: Optional[int] = None
    radius: Optional[float] = None
    seed: int = 0
    noise: Optional[float] = None
    predictions: str = "default"
    check_invariants: bool = True
    out: Optional[str] = None
    svg: Optional[str] = None

    def __post_init__(self):
        if self.algo not in ALGOS:
            raise ValueError(f"unknown algorithm {self.algo!r}; choose one of {sorted(ALGOS)}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.scenario != "random" and self.scenario not in SCENARIO_IDS:
            raise ValueError(f"scenario must be 1..6 or 'random', got {self.scenario!r}")
        if self.algo != "optfprl" and (self.strategy != AGNOSTIC or self.path_budget is not None or self.cadence != 1):
            raise ValueError("--strategy, --path-budget and --cadence apply to optfprl only")
        if self.cadence < 1:
            raise ValueError("cadence must be a positive integer")
        if self.horizon is not None and self.horizon < 0:
            raise ValueError("horizon must be nonnegative")

    def build_scenario(self) -> Scenario:
        if self.scenario == "random":
            return random_scenario(self.seed, horizon=200 if self.horizon is None else self.horizon,
                                   dim=2 if self.dim is None else self.dim,
                                   radius=1.0 if self.radius is None else self.radius, noise=self.noise)
        return make_scenario(int(self.scenario), horizon=HORIZON if self.horizon is None else self.horizon,
                             dim=DIM if self.dim is None else self.dim,
                             radius=RADIUS if self.radius is None else self.radius,
                             prediction_mode=self.predictions)


def strategy_for(scenario: Scenario, kind: str, path_budget: Optional[float] = None,
                 comparators: Optional[np.ndarray] = None) -> StrategyConfig:
    """Strategy config for a scenario; the known-path budget defaults to the realized path."""
    R = scenario.feasible_set.radius
    if kind == KNOWN_PATH and path_budget is None:
        U = scenario.comparators() if comparators is None else comparators
        path_budget = metrics.path_length(U)
    return StrategyConfig(kind, R, path_budget or 0.0)


def run_scenario(scenario: Scenario, algo: str = "optfprl", strategy: Optional[StrategyConfig] = None,
                 cadence: int = 1, check_invariants: bool = True, first_slot: str = "consistent",
                 comparators: Optional[np.ndarray] = None):
    """Play ``algo`` on ``scenario``; return (trace, report).

    ``comparators`` defaults to the per-slot minimizers.
    """
    S = scenario.feasible_set
    T = scenario.horizon
    U = scenario.comparators() if comparators is None else np.asarray(comparators, dtype=float)
    kind = ALGOS.get(algo, algo)
    if kind == "optfprl" and strategy is None:
        strategy = strategy_for(scenario, AGNOSTIC)
    trace = metrics.Trace(radius=S.radius, algo=algo, strategy=strategy.kind if kind == "optfprl" else "")

    if kind == "optfprl":
        learner = OptFPRL(S, strategy, scenario.prediction(1), cadence=cadence, first_slot=first_slot,
                          check_invariants=check_invariants)
        for t in range(1, T + 1):
            x_t = learner.x
            cost = scenario.cost(t)
            out = learner.step(cost, scenario.prediction(t + 1), comparator=U[t - 1])
            trace.record(x_t, U[t - 1], cost.coef @ x_t, cost.coef @ U[t - 1], out.epsilon,
                         sigma=out.sigma_t, sigma_cum=learner.state.sigma_cum, state_norm=out.state_norm,
                         delta=out.delta_t, pruned=out.pruned)
        return trace, metrics.report(trace, strategy)

    optimistic = kind in (bl.OPT_FTRL, bl.OPT_OGD)
    zero = np.zeros(S.dim)

    def pred_grad(t, x):
        return subgradient(scenario.prediction(t), x) if optimistic else zero

    state = bl.init(kind, S, first_pred_grad=pred_grad(1, zero))
    for t in range(1, T + 1):
        x_t = state.x_current
        cost = scenario.cost(t)
        g = subgradient(cost, x_t)
        g_pred = pred_grad(t, x_t)
        if kind == bl.FTRL:
            bl.ftrl_adaptive_step(state, g, S)
        elif kind == bl.OGD:
            bl.ogd_adaptive_step(state, g, S)
        elif kind == bl.OPT_FTRL:
            bl.optimistic_ftrl_step(state, g, g_pred, pred_grad(t + 1, state.x_current), S)
        else:
            bl.optimistic_ogd_step(state, g, g_pred, pred_grad(t + 1, state.x_current), S)
        if check_invariants and not S.contains(state.x_current):
            raise InvariantViolation(f"slot {t}: {algo} produced an infeasible iterate")
        G = state.grad_energy
        if kind in (bl.FTRL, bl.OPT_FTRL):
            reg_level = state.scale * math.sqrt(G)
        else:
            reg_level = math.sqrt(G) / state.scale
        trace.record(x_t, U[t - 1], cost.coef @ x_t, cost.coef @ U[t - 1], float(np.linalg.norm(g - g_pred)),
                     sigma_cum=reg_level, state_norm=float(np.linalg.norm(state.g_cum)))
    return trace, metrics.report(trace)


def run_experiment(config: RunConfig):
    """Build the configured scenario, run it, and export CSV/SVG if paths are set."""
    from .export import export_csv, render_chart

    scenario = config.build_scenario()
    strategy = None
    if config.algo == "optfprl":
        strategy = strategy_for(scenario, config.strategy, config.path_budget)
    trace, rep = run_scenario(scenario, config.algo, strategy, cadence=config.cadence,
                              check_invariants=config.check_invariants)
    if config.out:
        export_csv(trace, rep, config.out, header=config_header(config, scenario))
    if config.svg:
        render_chart([trace], config.svg)
    return trace, rep


def config_header(config: RunConfig, scenario: Scenario) -> list[str]:
    fields = {
        "scenario": config.scenario, "algo": config.algo, "strategy": config.strategy,
        "path_budget": config.path_budget, "cadence": config.cadence, "horizon": scenario.horizon,
        "dim": scenario.dim, "radius": scenario.feasible_set.radius, "seed": config.seed,
        "noise": config.noise, "predictions": scenario.prediction_mode,
    }
    return [" ".join(f"{k}={v}" for k, v in fields.items())]


def with_overrides(config: RunConfig, **kw) -> RunConfig:
    return replace(config, **{k: v for k, v in kw.items() if v is not None})
