import re

import numpy as np
import pytest

from optfprl.geometry import Ball, Box
from optfprl.harness import cli
from optfprl.harness.export import COLUMNS, export_csv, read_csv, render_chart
from optfprl.harness.grid import grid_argmin_oracle, update_objective
from optfprl.harness.runner import RunConfig, run_experiment, run_scenario, strategy_for
from optfprl.harness.scenarios import make_scenario
from optfprl.metrics import Trace, report
from optfprl.oracles import CostSpec


def final_avg(trace):
    return trace.average_regret_curve()[-1]


@pytest.mark.parametrize("p, expected", [([0.0, 0.0], [0.0, 0.0]), ([1.0, 0.0], [-1.0, 0.0]), ([6.0, 0.0], [-2.0, 0.0])])
def test_grid_oracle_examples(ball2, p, expected):
    x = grid_argmin_oracle(update_objective(np.array(p), 1.0, CostSpec.zero(2)), ball2, 1e-3)
    assert np.linalg.norm(x - expected) <= 1e-3


def test_grid_oracle_box_1d():
    S = Box([1.0])
    x = grid_argmin_oracle(update_objective(np.array([0.25]), 1.0, CostSpec.linear([0.5])), S, 1e-3)
    assert abs(x[0] + 0.75) <= 1e-3


def test_grid_oracle_too_coarse():
    with pytest.raises(ValueError):
        grid_argmin_oracle(update_objective(np.zeros(2), 1.0, CostSpec.zero(2)), Ball(1.0, 2), 1.0)


def test_grid_oracle_dimension_limit():
    with pytest.raises(ValueError):
        grid_argmin_oracle(update_objective(np.zeros(3), 1.0, CostSpec.zero(3)), Ball(1.0, 3), 0.1)


def test_scenario4_optfprl_beats_ftrl():
    S = make_scenario(4)
    opt, _ = run_scenario(S, "optfprl", strategy_for(S, "agnostic"))
    ftrl, _ = run_scenario(S, "ftrl")
    assert final_avg(opt) < final_avg(ftrl)


@pytest.fixture(scope="module")
def scenario6():
    return make_scenario(6)


def decay(trace):
    """(final average regret, peak after t = 100)."""
    c = trace.average_regret_curve()
    return float(c[-1]), float(np.max(c[100:]))


def test_scenario6_ftrl_trapped(scenario6):
    final, peak = decay(run_scenario(scenario6, "ftrl")[0])
    assert final >= 0.5 * peak


@pytest.mark.parametrize("strategy", ["agnostic", "known-path", "observed-path", "recursive"])
def test_scenario6_optfprl_decays(scenario6, strategy):
    final, peak = decay(run_scenario(scenario6, "optfprl", strategy_for(scenario6, strategy))[0])
    assert final < 0.5 * peak, f"final {final:.4g} vs peak after t=100 {peak:.4g}"


def test_scenario6_optimistic_ftrl_decays(scenario6):
    final, peak = decay(run_scenario(scenario6, "opt-ftrl")[0])
    assert final < 0.5 * peak, f"final {final:.4g} vs peak after t=100 {peak:.4g}"


def test_zero_horizon():
    trace, rep = run_experiment(RunConfig(scenario=4, horizon=0))
    assert len(trace) == 0 and rep.regret_cum == 0.0


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(algo="ftrl", strategy="recursive")
    with pytest.raises(ValueError):
        RunConfig(scenario=7)
    with pytest.raises(ValueError):
        RunConfig(cadence=0)
    with pytest.raises(ValueError):
        RunConfig(algo="adam")


def test_known_path_budget_defaults_to_measured_path():
    S = make_scenario(1, horizon=2000)
    assert strategy_for(S, "known-path").path_budget == pytest.approx(4.0)
    assert strategy_for(S, "known-path", 10.0).path_budget == 10.0


def test_every_algo_and_strategy_runs():
    for algo in ("optfprl", "ftrl", "ogd", "opt-ftrl", "opt-ogd"):
        strategies = ("agnostic", "known-path", "observed-path", "recursive") if algo == "optfprl" else ("agnostic",)
        for s in strategies:
            trace, rep = run_experiment(RunConfig(scenario=6, algo=algo, strategy=s, horizon=300))
            assert len(trace) == 300
            if algo == "optfprl":
                assert rep.bound_satisfied


def test_csv_empty_trace(tmp_path):
    tr = Trace(radius=1.0)
    export_csv(tr, report(tr), tmp_path / "e.csv")
    lines = [l for l in (tmp_path / "e.csv").read_text().splitlines() if not l.startswith("#")]
    assert lines == [",".join(COLUMNS)]


def test_csv_scenario1_rows(tmp_path):
    out = tmp_path / "s1.csv"
    run_experiment(RunConfig(scenario=1, strategy="recursive", out=str(out)))
    rows = read_csv(out)
    assert len(rows) == 5000
    assert tuple(rows[0].keys()) == COLUMNS
    assert rows[0]["t"] == "1" and rows[-1]["t"] == "5000"
    assert {r["pruned"] for r in rows} <= {"0", "1"}
    assert all(r["delta"] != "" for r in rows)


def test_csv_delta_empty_unless_recursive(tmp_path):
    out = tmp_path / "a.csv"
    run_experiment(RunConfig(scenario=2, horizon=50, out=str(out)))
    assert all(r["delta"] == "" for r in read_csv(out))


def test_csv_header_records_seed(tmp_path):
    out = tmp_path / "r.csv"
    run_experiment(RunConfig(scenario="random", seed=11, noise=0.3, out=str(out)))
    head = out.read_text().splitlines()[0]
    assert head.startswith("#") and "seed=11" in head


def test_two_trace_chart(tmp_path):
    S = make_scenario(4, horizon=400)
    traces = [run_scenario(S, "optfprl", strategy_for(S, "agnostic"))[0], run_scenario(S, "ftrl")[0]]
    render_chart(traces, tmp_path / "c.svg")
    svg = (tmp_path / "c.svg").read_text()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count("<polyline") == 2
    assert len(re.findall(r'class="legend"', svg)) == 2
    render_chart(traces, tmp_path / "d.svg")
    assert (tmp_path / "d.svg").read_bytes() == (tmp_path / "c.svg").read_bytes()


def test_cli_run_writes_outputs(tmp_path, capsys):
    csv_path, svg_path = tmp_path / "o.csv", tmp_path / "o.svg"
    code = cli.main(["run", "--scenario", "5", "--algo", "optfprl", "--strategy", "observed-path",
                     "--horizon", "200", "--check-invariants", "on", "--out", str(csv_path), "--svg", str(svg_path)])
    assert code == 0
    assert len(read_csv(csv_path)) == 200
    assert svg_path.read_text().startswith("<svg")
    assert "regret=" in capsys.readouterr().out


def test_cli_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nscenario = random\nseed=2\nnoise=0.5\nhorizon=40\ncheck-invariants=off\n"
                   f"out={tmp_path / 'f.csv'}\n")
    args = cli.build_parser().parse_args(["run", "--config", str(cfg), "--seed", "9"])
    config = cli.config_from_args(args)
    assert config.scenario == "random" and config.seed == 9 and config.horizon == 40
    assert config.check_invariants is False and config.noise == 0.5
    assert cli.main(["run", "--config", str(cfg)]) == 0
    assert len(read_csv(tmp_path / "f.csv")) == 40


def test_cli_rejects_strategy_for_baseline(tmp_path, capsys):
    code = cli.main(["run", "--algo", "ogd", "--strategy", "recursive", "--out", str(tmp_path / "x.csv")])
    assert code == 2
    assert "optfprl only" in capsys.readouterr().err


def test_cli_requires_out(capsys):
    assert cli.main(["run", "--scenario", "1"]) == 2


def test_cli_bad_config_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("learning_rate=3\n")
    assert cli.main(["run", "--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == 2


def test_cli_verify_exit_code(monkeypatch, capsys):
    from optfprl.harness import verify
    from optfprl.harness.verify import CheckResult
    monkeypatch.setattr(verify, "run_all", lambda quick=False: [CheckResult("a", True), CheckResult("b", False)])
    assert cli.main(["verify"]) == 1
    monkeypatch.setattr(verify, "run_all", lambda quick=False: [CheckResult("a", True)])
    assert cli.main(["verify"]) == 0
    assert "1/1 checks passed" in capsys.readouterr().out
