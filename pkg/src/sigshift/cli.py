"""Command-line front end.

Exit codes: 0 on success (including a failing smoothness verdict, which is a
result, not an error), 2 for malformed configs or usage errors, 3 when a
generator rejects infeasible parameters.

Every subcommand echoes its fully resolved configuration as JSON on stderr so
runs are reproducible from logs alone.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .config import build_environment, preset_names, resolve_config
from .env.io import save_csv
from .env.holder import verify_holder
from .errors import ConfigError, GeneratorRejection
from .harness import export_csv, export_json, parse_run_config, resolve_checkpoints, run_many
from .oracle.evictions import eviction_times, gap_dependent_rate
from .oracle.rates import RateParams, minimax_rate, phase_transition_classify
from .oracle.shifts import DYADIC, EXACT, phase_rate, significant_shifts


def _echo(obj: dict) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True), file=sys.stderr)


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_env_spec(path: str) -> tuple[dict, int | None]:
    """Accept either a bare environment table or a run config with [env]."""
    doc = resolve_config(path)
    if "env" in doc and isinstance(doc["env"], dict):
        return dict(doc["env"]), (int(doc["T"]) if "T" in doc else None)
    return dict(doc), None


def _resolve_workers(args) -> int:
    if args.workers is not None:
        return max(1, args.workers)
    env_val = os.environ.get("SIGSHIFT_WORKERS")
    if env_val:
        try:
            return max(1, int(env_val))
        except ValueError as exc:
            raise ConfigError(f"SIGSHIFT_WORKERS must be an integer, got {env_val!r}") from exc
    return 1


def _cmd_simulate(args) -> int:
    raw = resolve_config(args.config)
    config = parse_run_config(raw)
    workers = _resolve_workers(args)
    env = build_environment(config.env_spec, config.T)
    resolved = {
        "env": config.env_spec,
        "policy": {"name": config.policy_name, **config.policy_config},
        "T": env.T,
        "R": config.R,
        "masterSeed": config.master_seed,
        "checkpoints": list(resolve_checkpoints(config, env)),
    }
    _echo(resolved)
    os.makedirs(args.out, exist_ok=True)
    events_path = os.path.join(args.out, "events.jsonl") if args.events else None
    agg = run_many(config, workers=workers, events_path=events_path)
    export_csv(agg, os.path.join(args.out, "aggregate.csv"))
    export_json(resolved, os.path.join(args.out, "config.echo.json"))
    print(f"wrote {args.out}/aggregate.csv ({agg.R} replications, {len(agg.checkpoints)} checkpoints)")
    return 0


def _cmd_shifts(args) -> int:
    spec, default_T = _load_env_spec(args.env)
    _echo({"command": "shifts", "env": spec, "mode": args.mode})
    env = build_environment(spec, default_T)
    profile = significant_shifts(env, mode=args.mode)
    out = profile.to_dict()
    out["mode"] = args.mode
    out["phase_rate"] = phase_rate(profile, K=env.K)
    _emit(out, args.out)
    return 0


def _cmd_rates(args) -> int:
    params = RateParams(beta=args.beta, lam=args.lam, K=args.K, T=args.T)
    resolved = {"command": "rates", "beta": params.beta, "lam": params.lam, "K": params.K, "T": params.T}
    _echo(resolved)
    _emit({**resolved, "minimax_rate": minimax_rate(params)}, args.out)
    return 0


def _cmd_gen_env(args) -> int:
    spec, default_T = _load_env_spec(args.env)
    _echo({"command": "gen-env", "env": spec, "out": args.out})
    env = build_environment(spec, default_T)
    save_csv(env, args.out)
    print(f"wrote {args.out} (K={env.K}, T={env.T})")
    return 0


def _cmd_verify_holder(args) -> int:
    spec, default_T = _load_env_spec(args.env)
    resolved = {
        "command": "verify-holder",
        "env": spec,
        "beta": args.beta,
        "lam": args.lam,
        "tol": args.tol,
        "pairs": args.pairs,
        "grid": args.grid,
        "seed": args.seed,
    }
    _echo(resolved)
    env = build_environment(spec, default_T)
    report = verify_holder(
        env,
        beta=args.beta,
        lam=args.lam,
        sample_pairs=args.pairs,
        tol=args.tol,
        grid_size=args.grid,
        seed=args.seed,
    )
    _emit(
        {
            "passed": report.passed,
            "worst_ratio": report.worst_ratio,
            "witness": list(report.witness) if report.witness is not None else None,
        },
        args.out,
    )
    return 0


def _cmd_classify(args) -> int:
    spec, default_T = _load_env_spec(args.env)
    resolved = {"command": "classify", "env": spec, "beta": args.beta, "tol": args.tol}
    _echo(resolved)
    env = build_environment(spec, default_T)
    label = phase_transition_classify(env, beta=args.beta, grid_size=args.grid, tol=args.tol)
    _emit({"classification": label}, args.out)
    return 0


def _cmd_evict(args) -> int:
    spec, default_T = _load_env_spec(args.env)
    _echo({"command": "evict", "env": spec, "c2": args.c2, "mode": args.mode})
    env = build_environment(spec, default_T)
    trace = eviction_times(env, c2=args.c2, mode=args.mode)
    out = trace.to_dict()
    out["gap_dependent_rate"] = gap_dependent_rate(env, trace)
    _emit(out, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigshift",
        description="Simulation and analysis toolkit for smoothly drifting bandit environments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run replicated policy experiments from a config")
    p.add_argument("--config", required=True, help=f"config file or preset ({', '.join(preset_names())})")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--workers", type=int, default=None, help="process count (default: $SIGSHIFT_WORKERS or 1)")
    p.add_argument("--events", action="store_true", help="also write per-replication events.jsonl")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("shifts", help="locate significant shifts of an environment")
    p.add_argument("--env", required=True, help="environment config file")
    p.add_argument("--mode", choices=(EXACT, DYADIC), default=DYADIC)
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_shifts)

    p = sub.add_parser("rates", help="evaluate the minimax rate formula")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_rates)

    p = sub.add_parser("gen-env", help="materialize an environment's mean table to CSV")
    p.add_argument("--env", required=True, help="environment config file")
    p.add_argument("--out", required=True, help="CSV path")
    p.set_defaults(func=_cmd_gen_env)

    p = sub.add_parser("verify-holder", help="check smoothness of an environment's gap curves")
    p.add_argument("--env", required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--tol", type=float, default=1.0, help="relative slack on the coefficient (1.0 = factor 2)")
    p.add_argument("--pairs", type=int, default=2000)
    p.add_argument("--grid", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_verify_holder)

    p = sub.add_parser("classify", help="certify whether drift stays below the safe threshold")
    p.add_argument("--env", required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--tol", type=float, default=0.05)
    p.add_argument("--grid", type=int, default=10000)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("evict", help="oracle eviction times and gap-dependent rate")
    p.add_argument("--env", required=True)
    p.add_argument("--c2", type=float, default=1.0)
    p.add_argument("--mode", choices=(EXACT, DYADIC), default=DYADIC)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_evict)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GeneratorRejection as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
