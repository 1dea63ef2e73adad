"""Replicated experiment driver: seeds, regret curves, aggregation, export.

Replication r derives its seed as mix64(masterSeed, r); environments are
rebuilt identically inside each worker process, so results are byte-identical
for any worker count and any execution order.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import build_environment
from .env.model import EnvironmentModel
from .errors import ConfigError
from .oracle.rates import RateParams, minimax_rate
from .policies import PolicyTrace, run_policy
from .rng import mix64

DEFAULT_CHECKPOINT_COUNT = 200

_RUN_KEYS = {"env", "policy", "T", "R", "masterSeed", "checkpoints"}


@dataclass(frozen=True)
class RunConfig:
    env_spec: dict
    policy_name: str
    policy_config: dict
    T: int | None
    R: int
    master_seed: int
    checkpoints: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.R < 1:
            raise ConfigError(f"R must be >= 1, got {self.R}")
        if self.T is not None and self.T < 1:
            raise ConfigError(f"T must be >= 1, got {self.T}")
        if self.checkpoints is not None:
            cp = tuple(int(c) for c in self.checkpoints)
            object.__setattr__(self, "checkpoints", cp)
            if any(b <= a for a, b in zip(cp, cp[1:])) or (cp and cp[0] < 1):
                raise ConfigError("checkpoints must be strictly increasing rounds >= 1")


def parse_run_config(raw: dict) -> RunConfig:
    extra = set(raw) - _RUN_KEYS
    if extra:
        raise ConfigError(f"run config has unknown keys {sorted(extra)}")
    if "env" not in raw or not isinstance(raw["env"], dict):
        raise ConfigError("run config needs an 'env' table")
    if "policy" not in raw or not isinstance(raw["policy"], dict) or "name" not in raw["policy"]:
        raise ConfigError("run config needs a 'policy' table with a 'name'")
    policy = dict(raw["policy"])
    name = policy.pop("name")
    cp = raw.get("checkpoints")
    return RunConfig(
        env_spec=dict(raw["env"]),
        policy_name=str(name),
        policy_config=policy,
        T=int(raw["T"]) if "T" in raw else None,
        R=int(raw.get("R", 1)),
        master_seed=int(raw.get("masterSeed", 0)),
        checkpoints=tuple(cp) if cp is not None else None,
    )


def log_checkpoints(T: int, count: int = DEFAULT_CHECKPOINT_COUNT) -> np.ndarray:
    """About `count` log-spaced integer rounds in [1, T], always ending at T."""
    if T <= count:
        return np.arange(1, T + 1, dtype=np.int64)
    pts = np.unique(np.round(np.logspace(0.0, np.log10(T), count)).astype(np.int64))
    pts = pts[(pts >= 1) & (pts <= T)]
    if pts[-1] != T:
        pts = np.append(pts, T)
    return pts


def resolve_checkpoints(config: RunConfig, env: EnvironmentModel) -> tuple[int, ...]:
    if config.checkpoints is None:
        return tuple(int(c) for c in log_checkpoints(env.T))
    cp = config.checkpoints
    if cp[-1] != env.T:
        raise ConfigError(f"last checkpoint must equal the built horizon {env.T}, got {cp[-1]}")
    return cp


def dynamic_regret(trace: PolicyTrace, env: EnvironmentModel) -> np.ndarray:
    """Cumulative true-gap regret of the pulled arms (uses means, not rewards)."""
    if len(trace) != env.T:
        raise ValueError(f"trace has {len(trace)} rounds, env horizon is {env.T}")
    pulls = np.asarray(trace.pulls, dtype=np.int64)
    if pulls.min() < 1 or pulls.max() > env.K:
        raise ValueError(f"trace pulls arms outside [1, {env.K}]")
    gaps = env.gaps_matrix()
    return np.cumsum(gaps[pulls - 1, np.arange(env.T)])


@dataclass(frozen=True)
class RegretAggregate:
    checkpoints: tuple[int, ...]
    mean: tuple[float, ...]
    std: tuple[float, ...]
    R: int

    def to_dict(self) -> dict:
        return {
            "checkpoints": list(self.checkpoints),
            "mean": list(self.mean),
            "std": list(self.std),
            "R": self.R,
        }


def _replicate(payload: tuple) -> tuple:
    idx, env_spec, default_T, policy_name, policy_config, seed, checkpoints, want_events = payload
    env = build_environment(env_spec, default_T)
    trace = run_policy(policy_name, env, seed, **policy_config)
    curve = dynamic_regret(trace, env)[np.asarray(checkpoints, dtype=np.int64) - 1]
    return idx, curve, (trace.events if want_events else None)


def run_many(config: RunConfig, workers: int = 1, events_path: str | None = None) -> RegretAggregate:
    """Run R replications and aggregate regret at the checkpoints.

    The aggregate is a pure fold over per-replication curves in replication
    order; worker count affects wall time only.
    """
    env = build_environment(config.env_spec, config.T)
    if config.T is not None and env.T != config.T and env.meta.get("kind") != "bump":
        raise ConfigError(f"top-level T={config.T} conflicts with environment horizon {env.T}")
    checkpoints = resolve_checkpoints(config, env)
    payloads = [
        (
            r,
            config.env_spec,
            config.T,
            config.policy_name,
            config.policy_config,
            mix64(config.master_seed, r),
            checkpoints,
            events_path is not None,
        )
        for r in range(config.R)
    ]
    curves = np.empty((config.R, len(checkpoints)), dtype=np.float64)
    events_by_rep: list[list | None] = [None] * config.R
    if workers <= 1:
        results = map(_replicate, payloads)
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        results = pool.map(_replicate, payloads)
    try:
        for idx, curve, events in results:
            curves[idx] = curve
            events_by_rep[idx] = events
    finally:
        if workers > 1:
            pool.shutdown()

    mean = curves.mean(axis=0)
    std = curves.std(axis=0, ddof=1) if config.R > 1 else np.zeros(len(checkpoints))
    if events_path is not None:
        with open(events_path, "w") as fh:
            for r, ev in enumerate(events_by_rep):
                fh.write(json.dumps({"replication": r, "events": ev}) + "\n")
    return RegretAggregate(
        checkpoints=checkpoints,
        mean=tuple(float(x) for x in mean),
        std=tuple(float(x) for x in std),
        R=config.R,
    )


def reference_curves(
    K: int,
    T: int,
    L_tilde: int,
    rate_params_list: tuple[RateParams, ...] = (),
    checkpoints: np.ndarray | None = None,
) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """Theory curves sampled at the checkpoints.

    "parametric" is sqrt((L_tilde + 1) K t); each RateParams contributes the
    minimax formula with its horizon replaced by the running t.
    """
    ts = np.asarray(checkpoints, dtype=np.int64) if checkpoints is not None else log_checkpoints(T)
    curves: dict[str, np.ndarray] = {
        "parametric": np.sqrt((L_tilde + 1) * K * ts.astype(np.float64)),
    }
    for p in rate_params_list:
        vals = np.asarray([minimax_rate(RateParams(p.beta, p.lam, p.K, int(t))) for t in ts])
        curves[f"minimax_beta{p.beta:g}_lam{p.lam:g}"] = vals
    return ts, curves


def export_csv(agg: RegretAggregate, path: str) -> None:
    """`checkpoint,mean,std` rows, full float precision."""
    with open(path, "w", newline="\n") as fh:
        fh.write("checkpoint,mean,std\n")
        for c, m, s in zip(agg.checkpoints, agg.mean, agg.std):
            fh.write(f"{c},{repr(m)},{repr(s)}\n")


def export_json(obj, path: str) -> None:
    data = obj.to_dict() if hasattr(obj, "to_dict") else obj
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")
