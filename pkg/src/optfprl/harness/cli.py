"""Command-line entry point: ``optfprl run ...`` and ``optfprl verify``."""

from __future__ import annotations

import argparse
import sys

from ..regularizers import STRATEGIES
from .runner import ALGOS, RunConfig, run_experiment
from .scenarios import PREDICTION_MODES

# flag name -> converter for values read from a config file
_FILE_KEYS = {
    "scenario": str, "algo": str, "strategy": str, "path_budget": float, "cadence": int, "horizon": int,
    "dim": int, "radius": float, "seed": int, "noise": float, "predictions": str, "check_invariants": str,
    "out": str, "svg": str,
}


def _on_off(v: str) -> bool:
    v = v.strip().lower()
    if v in ("on", "true", "1", "yes"):
        return True
    if v in ("off", "false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected on|off, got {v!r}")


def _scenario(v: str):
    v = str(v).strip()
    return "random" if v == "random" else int(v)


def read_config_file(path) -> dict:
    """Flat key=value file; '#' starts a comment, dashes in keys are accepted."""
    out = {}
    with open(path) as f:
        for n, raw in enumerate(f, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{n}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _FILE_KEYS:
                raise ValueError(f"{path}:{n}: unknown key {key!r}")
            out[key] = _FILE_KEYS[key](value)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="optfprl", description="Optimistic follow-the-pruned-leader experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one learner on one scenario")
    r.add_argument("--config", help="key=value file; flags given on the command line take precedence")
    r.add_argument("--scenario", type=_scenario, help="1..6 or 'random' (default 1)")
    r.add_argument("--algo", choices=sorted(ALGOS))
    r.add_argument("--strategy", choices=STRATEGIES)
    r.add_argument("--path-budget", type=float, dest="path_budget")
    r.add_argument("--cadence", type=int)
    r.add_argument("--horizon", type=int)
    r.add_argument("--dim", type=int)
    r.add_argument("--radius", type=float)
    r.add_argument("--seed", type=int)
    r.add_argument("--noise", type=float, help="prediction noise for random scenarios")
    r.add_argument("--predictions", choices=PREDICTION_MODES, help="prediction stream for scenarios 1..6")
    r.add_argument("--check-invariants", type=_on_off, dest="check_invariants", metavar="on|off")
    r.add_argument("--out", help="CSV path")
    r.add_argument("--svg", help="SVG chart path")

    v = sub.add_parser("verify", help="run the invariant and property suite")
    v.add_argument("--quick", action="store_true", help="smaller instance counts (runtime limits not enforced)")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = read_config_file(args.config) if args.config else {}
    if "scenario" in values:
        values["scenario"] = _scenario(values["scenario"])
    if "check_invariants" in values:
        values["check_invariants"] = _on_off(values["check_invariants"])
    for key in _FILE_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    return RunConfig(**values)


def cmd_run(args) -> int:
    try:
        config = config_from_args(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if not config.out:
        print("error: --out is required", file=sys.stderr)
        return 2
    trace, rep = run_experiment(config)
    avg = trace.average_regret_curve()
    print(f"T={len(trace)} regret={rep.regret_cum:.6g} avg={avg[-1] if len(avg) else 0.0:.6g} "
          f"P_T={rep.P_T:.6g} E_T={rep.E_T:.6g} bound={rep.bound_value} ok={rep.bound_satisfied}")
    return 0


def cmd_verify(args) -> int:
    from .verify import run_all

    results = run_all(quick=args.quick)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    return cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
