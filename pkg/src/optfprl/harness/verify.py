"""Invariant and property checks behind the ``verify`` subcommand and the acceptance tests.

Each check returns a :class:`CheckResult`; nothing here raises on a failed
property, so a caller can print every line before deciding the exit code.
"""

from __future__ import annotations

import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import metrics
from ..geometry import Ball, Box
from ..learner import OptFPRL
from ..oracles import CostSpec
from ..regularizers import AGNOSTIC, RECURSIVE, STRATEGIES
from .grid import grid_argmin_oracle, update_objective
from .runner import RunConfig, run_experiment, run_scenario, strategy_for
from .scenarios import SCENARIO_IDS, make_scenario, random_scenario

STATE_TOL = 1e-9
BOUND_TOL = 1e-6
CEILING_TOL = 1e-9
GRID_RESOLUTION = 1e-3
NOISE_LEVELS = (None, 0.0, 0.1, 0.5, 1.0, 3.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def random_instance(seed: int, horizon: int, dims=(1, 2, 16)):
    """Seeded instance with a mixed choice of dimension, set shape, radius and prediction noise."""
    rng = np.random.default_rng(10_000 + seed)
    d = int(dims[seed % len(dims)])
    noise = NOISE_LEVELS[rng.integers(len(NOISE_LEVELS))]
    radius = float(rng.uniform(0.5, 3.0))
    S = Box(np.full(d, radius / math.sqrt(d))) if seed % 4 == 3 else Ball(radius, d)
    return random_scenario(seed, horizon=horizon, feasible_set=S, noise=noise)


def state_bound_slack(trace: metrics.Trace) -> float:
    """max_t ||p_(1:t)|| - (R sigma_(1:t-1) + eps_t); nonpositive when the bound holds."""
    norms = np.asarray(trace.state_norm)
    if norms.size == 0:
        return -math.inf
    prev = np.concatenate([[0.0], np.asarray(trace.sigma_cum)[:-1]])
    return float(np.max(norms - (trace.radius * prev + np.asarray(trace.epsilon))))


def ceiling_slack(trace: metrics.Trace) -> float:
    """max_t delta_(1:t) - 2 sqrt(3) R sqrt(E_t)."""
    if not trace.delta:
        return -math.inf
    dc = np.cumsum(np.asarray(trace.delta, dtype=float))
    E = np.cumsum(np.square(trace.epsilon))
    return float(np.max(dc - 2.0 * math.sqrt(3.0) * trace.radius * np.sqrt(E)))


def check_perfect_collapse(horizon: int = 1000) -> CheckResult:
    t0 = time.perf_counter()
    sc = make_scenario(4, horizon=horizon, prediction_mode="perfect")
    trace, rep = run_scenario(sc, "optfprl", strategy_for(sc, AGNOSTIC))
    elapsed = time.perf_counter() - t0
    max_norm = max(trace.state_norm, default=0.0)
    ok = rep.regret_cum <= 1e-9 and max_norm == 0.0 and elapsed < 1.0
    return CheckResult("perfect-prediction collapse", ok,
                       f"regret={rep.regret_cum:.3e} max||p||={max_norm:.3e} time={elapsed:.2f}s")


def check_state_bound(n_random: int = 100, horizon: int = 500, scenario_horizon: int | None = None) -> CheckResult:
    worst, n_runs = -math.inf, 0
    for sid in SCENARIO_IDS:
        sc = make_scenario(sid) if scenario_horizon is None else make_scenario(sid, horizon=scenario_horizon)
        for kind in STRATEGIES:
            trace, _ = run_scenario(sc, "optfprl", strategy_for(sc, kind), check_invariants=False)
            worst = max(worst, state_bound_slack(trace))
            n_runs += 1
    for seed in range(n_random):
        sc = random_instance(seed, horizon)
        kind = STRATEGIES[seed % len(STRATEGIES)]
        trace, _ = run_scenario(sc, "optfprl", strategy_for(sc, kind), check_invariants=False)
        worst = max(worst, state_bound_slack(trace))
        n_runs += 1
    return CheckResult("state bound", worst <= STATE_TOL, f"{n_runs} runs, worst slack {worst:.3e}")


def check_theorem_bounds(n_instances: int = 500, horizon: int = 200, time_limit: float = 60.0):
    """Bound inequality for every strategy, plus the recursion ceiling on the same recursive runs."""
    t0 = time.perf_counter()
    failures = {k: 0 for k in STRATEGIES}
    min_margin = {k: math.inf for k in STRATEGIES}
    worst_ceiling = -math.inf
    for kind in STRATEGIES:
        for seed in range(n_instances):
            sc = random_instance(seed, horizon, dims=(1, 2, 3, 5, 16))
            trace, rep = run_scenario(sc, "optfprl", strategy_for(sc, kind), check_invariants=False)
            if rep.bound_value > 0:
                min_margin[kind] = min(min_margin[kind], rep.bound_value - rep.regret_cum)
            if rep.regret_cum > rep.bound_value + BOUND_TOL:
                failures[kind] += 1
            if kind == RECURSIVE:
                worst_ceiling = max(worst_ceiling, ceiling_slack(trace))
    elapsed = time.perf_counter() - t0
    detail = " ".join(f"{k}:fail={failures[k]},min_margin={min_margin[k]:.3g}" for k in STRATEGIES)
    bounds = CheckResult("theorem bounds", sum(failures.values()) == 0 and elapsed < time_limit,
                         f"{detail} time={elapsed:.1f}s")
    ceiling = CheckResult("recursion ceiling", worst_ceiling <= CEILING_TOL,
                          f"{n_instances} runs, worst slack {worst_ceiling:.3e}")
    return bounds, ceiling


def oracle_mini_run(seed: int, resolution: float = GRID_RESOLUTION) -> float:
    """Largest distance between an OptFPRL iterate and the grid oracle's answer on one mini-run."""
    rng = np.random.default_rng(20_000 + seed)
    d = int(rng.integers(1, 3))
    T = int(rng.integers(1, 6))
    r = float(rng.uniform(0.5, 1.0))
    S = Ball(r, d) if rng.random() < 0.5 else Box(rng.uniform(0.4, 0.8, size=d))
    kind = STRATEGIES[seed % len(STRATEGIES)]
    strategy = strategy_for(random_scenario(0, horizon=1, feasible_set=S), kind, path_budget=float(rng.uniform(0, 4)))
    costs = rng.normal(size=(T, d))
    preds = [CostSpec.linear(c) for c in costs + rng.normal(scale=rng.choice([0.0, 0.3, 1.0]), size=(T, d))]
    preds.append(CostSpec.zero(d))
    comparators = [S.linear_argmin(c) for c in costs]
    learner = OptFPRL(S, strategy, preds[0], check_invariants=True)
    worst = 0.0
    for t in range(T):
        learner.step(CostSpec.linear(costs[t]), preds[t + 1], comparator=comparators[t])
        st = learner.state
        if st.sigma_cum == 0.0 and not np.any(st.p_cum + preds[t + 1].coef):
            continue  # flat objective: every feasible point is a minimizer
        ref = grid_argmin_oracle(update_objective(st.p_cum, st.sigma_cum, preds[t + 1]), S, resolution)
        worst = max(worst, float(np.linalg.norm(learner.x - ref)))
    return worst


def check_oracle_equivalence(n_runs: int = 50, resolution: float = GRID_RESOLUTION) -> CheckResult:
    worst = max(oracle_mini_run(seed, resolution) for seed in range(n_runs))
    return CheckResult("grid oracle equivalence", worst <= resolution, f"{n_runs} mini-runs, worst distance {worst:.2e}")


def final_average(trace) -> float:
    return float(trace.average_regret_curve()[-1])


def check_orderings(horizon: int = 5000, time_limit: float = 60.0) -> list[CheckResult]:
    t0 = time.perf_counter()
    runs = {}

    def run(sid, algo, kind=AGNOSTIC, mode="default"):
        key = (sid, algo, kind, mode)
        if key not in runs:
            sc = make_scenario(sid, horizon=horizon, prediction_mode=mode)
            strat = strategy_for(sc, kind) if algo == "optfprl" else None
            runs[key] = run_scenario(sc, algo, strat)[0]
        return runs[key]

    out = []
    t_probe = min(1900, horizon)
    a_f = run(1, "ftrl").average_regret_curve()[t_probe - 1]
    a_o = run(1, "optfprl").average_regret_curve()[t_probe - 1]
    out.append(CheckResult("ordering (a) scenario 1", a_f >= 2.0 * a_o,
                           f"t={t_probe}: ftrl={a_f:.4g} optfprl={a_o:.4g} ratio={a_f / max(a_o, 1e-300):.3g}"))

    cf = run(3, "ftrl").average_regret_curve()
    co = run(3, "optfprl").average_regret_curve()
    switch = min(1000, horizon - 1)
    peak_f = float(np.max(cf[switch:]))
    ok = cf[-1] > 0.5 * peak_f and co[-1] < 0.5 * float(np.max(co))
    out.append(CheckResult("ordering (b) scenario 3", ok,
                           f"ftrl final={cf[-1]:.4g} post-switch peak={peak_f:.4g}; "
                           f"optfprl final={co[-1]:.4g} peak={np.max(co):.4g}"))

    o4, g4, f4 = (final_average(run(4, a)) for a in ("optfprl", "ogd", "ftrl"))
    out.append(CheckResult("ordering (c) scenario 4", o4 < g4 < f4,
                           f"optfprl={o4:.4g} ogd={g4:.4g} ftrl={f4:.4g}"))

    o5, g5, f5 = (final_average(run(5, a)) for a in ("optfprl", "ogd", "ftrl"))
    out.append(CheckResult("ordering (d) scenario 5", o5 > max(g5, f5),
                           f"optfprl={o5:.4g} ogd={g5:.4g} ftrl={f5:.4g}"))

    ref = final_average(run(6, "ftrl"))
    oft = final_average(run(6, "opt-ftrl"))
    ofp = final_average(run(6, "optfprl"))
    others = " ".join(f"{k}={final_average(run(6, 'optfprl', k)):.4g}" for k in STRATEGIES if k != AGNOSTIC)
    out.append(CheckResult("ordering (e) scenario 6", oft < 0.1 * ref and ofp < 0.1 * ref,
                           f"ftrl(no predictions)={ref:.4g} opt-ftrl={oft:.4g} optfprl={ofp:.4g} "
                           f"[not scored: optfprl {others} opt-ogd={final_average(run(6, 'opt-ogd')):.4g}]"))

    elapsed = time.perf_counter() - t0
    out.append(CheckResult("scenario suite runtime", elapsed < time_limit, f"{elapsed:.1f}s"))
    return out


def monotone_ratio_trace(seed: int, T: int = 50, R: float = 1.0) -> metrics.Trace:
    """Trace whose sqrt(E_t/P'_t) is nondecreasing by construction, with a moving comparator."""
    rng = np.random.default_rng(30_000 + seed)
    d = 2
    U = rng.normal(size=(T, d))
    U *= R / np.maximum(np.linalg.norm(U, axis=1, keepdims=True), R)
    P = metrics.augmented_path_series(U, R)
    E = P * np.cumsum(rng.uniform(0.0, 1.0, size=T))   # E_t / P'_t is a nondecreasing partial sum
    E = np.maximum.accumulate(E)
    eps = np.sqrt(np.diff(np.concatenate([[0.0], E])))
    tr = metrics.Trace(radius=R)
    for t in range(T):
        tr.record(U[t], U[t], 0.0, 0.0, eps[t])
    return tr


def random_trace(seed: int, T: int = 50, R: float = 1.0) -> metrics.Trace:
    rng = np.random.default_rng(40_000 + seed)
    U = rng.uniform(-R, R, size=(T, 1))
    tr = metrics.Trace(radius=R)
    for t in range(T):
        tr.record(U[t], U[t], 0.0, 0.0, float(rng.exponential()) * (rng.random() < 0.8))
    return tr


def check_metric_identities(n: int = 200) -> CheckResult:
    worst_h, worst_a = -math.inf, 0.0
    for seed in range(n):
        tr = random_trace(seed)
        _, H = metrics.pred_energy_and_hybrid(tr)
        E_prev = float(np.sum(np.square(tr.epsilon[:-1])))
        P = metrics.path_length(tr.comparators)
        worst_h = max(worst_h, H - math.sqrt(2.0 * tr.radius * E_prev * P))
        worst_a = max(worst_a, metrics.corrective_a(monotone_ratio_trace(seed)))
    ok = worst_h <= 1e-9 and worst_a == 0.0
    return CheckResult("metric identities", ok, f"worst hybrid slack {worst_h:.3e}, max A_T on monotone ratios {worst_a:.3e}")


def check_determinism() -> CheckResult:
    with tempfile.TemporaryDirectory() as tmp:
        blobs = []
        for i in range(2):
            for cfg in (RunConfig(scenario=2, horizon=800, strategy="observed-path"),
                        RunConfig(scenario="random", seed=7, noise=0.5, strategy=RECURSIVE),
                        RunConfig(scenario=6, algo="opt-ogd", horizon=800)):
                path = Path(tmp) / f"{i}-{cfg.scenario}-{cfg.algo}.csv"
                run_experiment(RunConfig(**{**cfg.__dict__, "out": str(path)}))
                blobs.append(path.read_bytes())
    half = len(blobs) // 2
    ok = blobs[:half] == blobs[half:]
    return CheckResult("determinism", ok, f"{half} configs run twice, byte-identical={ok}")


def run_all(quick: bool = False) -> list[CheckResult]:
    """Full suite; ``quick`` shrinks sizes for a smoke pass (time limits are then meaningless)."""
    if quick:
        results = [check_perfect_collapse(200), check_state_bound(10, 100, scenario_horizon=600)]
        results.extend(check_theorem_bounds(25, 100, time_limit=math.inf))
        results.append(check_oracle_equivalence(5))
        results.extend(check_orderings(5000))
    else:
        results = [check_perfect_collapse(), check_state_bound()]
        results.extend(check_theorem_bounds())
        results.append(check_oracle_equivalence())
        results.extend(check_orderings())
    results.append(check_metric_identities())
    results.append(check_determinism())
    return results
