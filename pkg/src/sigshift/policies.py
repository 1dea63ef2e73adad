"""Learning policies: episodic replay-based elimination (META), randomized
successive elimination, a uniform-random baseline, and a shift-oracle
restart policy, plus trace serialization and the policy registry.

Reward draws are pre-generated per round from a seeded stream (one draw per
round regardless of the arm chosen), so traces are bit-reproducible from
(env, config, seed) and independent of how much randomness a policy consumes
for its own decisions.
"""
from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .env.model import BERNOULLI, GAUSSIAN, EnvironmentModel
from .errors import ConfigError
from .oracle.evictions import EvictionTrace
from .oracle.shifts import ShiftProfile, dyadic_lengths, significant_shifts
from .rng import keyed_u01, make_rng

# stream tags: rewards, arm picks, and replay indicators never share a key
_STREAM_REWARD = 0x5EED
_STREAM_PLAY = 0x91A1
_STREAM_REPLAY = 0x4EB1


@dataclass
class PolicyTrace:
    """Per-round pulls and observed rewards plus timestamped events."""

    pulls: np.ndarray
    rewards: np.ndarray
    events: list[dict]
    policy: str = ""

    def __len__(self) -> int:
        return len(self.pulls)


def save_trace(trace: PolicyTrace, path: str, events_path: str | None = None) -> None:
    """CSV `round,arm,reward` plus a JSON event sidecar next to it."""
    with open(path, "w", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["round", "arm", "reward"])
        for t in range(len(trace)):
            w.writerow([t + 1, int(trace.pulls[t]), repr(float(trace.rewards[t]))])
    if events_path is None:
        events_path = os.path.splitext(path)[0] + ".events.json"
    with open(events_path, "w") as fh:
        json.dump(trace.events, fh, indent=0)
        fh.write("\n")


def load_trace(path: str, events_path: str | None = None) -> PolicyTrace:
    pulls: list[int] = []
    rewards: list[float] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["round", "arm", "reward"]:
            raise ConfigError(f"{path}: expected header 'round,arm,reward', got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                rnd, arm, y = int(row[0]), int(row[1]), float(row[2])
            except (ValueError, IndexError) as exc:
                raise ConfigError(f"{path}: row {lineno}: {exc}") from None
            if rnd != len(pulls) + 1:
                raise ConfigError(f"{path}: row {lineno}: rounds must be contiguous from 1")
            pulls.append(arm)
            rewards.append(y)
    events: list[dict] = []
    if events_path is None:
        cand = os.path.splitext(path)[0] + ".events.json"
        events_path = cand if os.path.exists(cand) else None
    if events_path is not None:
        with open(events_path) as fh:
            events = json.load(fh)
    return PolicyTrace(
        pulls=np.asarray(pulls, dtype=np.int64),
        rewards=np.asarray(rewards, dtype=np.float64),
        events=events,
        policy="external",
    )


def _reward_stream(env: EnvironmentModel, seed: int):
    """Per-round scalar reward draw(t, arm); one stream draw per round."""
    mu = env.means_matrix()
    noise = env.noise
    rng = make_rng(seed, _STREAM_REWARD)
    if noise.kind == GAUSSIAN:
        eps = rng.normal(0.0, math.sqrt(noise.variance), size=env.T)
        if noise.clip:

            def draw(t: int, a: int) -> float:
                return min(1.0, max(0.0, mu[a - 1, t - 1] + eps[t - 1]))

        else:

            def draw(t: int, a: int) -> float:
                return mu[a - 1, t - 1] + eps[t - 1]

    elif noise.kind == BERNOULLI:
        if mu.min() < 0.0 or mu.max() > 1.0:
            raise ValueError("Bernoulli noise needs all means in [0,1]")
        u = rng.random(env.T)

        def draw(t: int, a: int) -> float:
            return float(u[t - 1] < mu[a - 1, t - 1])

    else:

        def draw(t: int, a: int) -> float:
            return float(mu[a - 1, t - 1])

    return draw


def _rewards_for_pulls(env: EnvironmentModel, seed: int, pulls: np.ndarray) -> np.ndarray:
    """Vectorized twin of _reward_stream for a whole pull vector."""
    mu = env.means_matrix()
    noise = env.noise
    rng = make_rng(seed, _STREAM_REWARD)
    base = mu[pulls - 1, np.arange(env.T)]
    if noise.kind == GAUSSIAN:
        y = base + rng.normal(0.0, math.sqrt(noise.variance), size=env.T)
        return np.clip(y, 0.0, 1.0) if noise.clip else y
    if noise.kind == BERNOULLI:
        if mu.min() < 0.0 or mu.max() > 1.0:
            raise ValueError("Bernoulli noise needs all means in [0,1]")
        return (rng.random(env.T) < base).astype(np.float64)
    return base.astype(np.float64)


def estimate_iw(active_set_size: int, chosen_arm: int, reward: float, a_prime: int, a: int) -> float:
    """Importance-weighted relative-gap estimate |A| (Y(a')1{pi=a'} - Y(a)1{pi=a})."""
    if active_set_size < 1:
        raise ValueError(f"active set size must be >= 1, got {active_set_size}")
    if a_prime == a:
        return 0.0
    if chosen_arm == a_prime:
        return active_set_size * reward
    if chosen_arm == a:
        return -active_set_size * reward
    return 0.0


def _meta_threshold(ns: np.ndarray, c2: float, K: int, lnT: float) -> np.ndarray:
    return c2 * (np.sqrt(K * lnT * ns) + K * lnT)


def eviction_check_meta(window_sums, window_len: int, c2: float, K: int, T: int) -> bool:
    """True iff max_a' of the window's estimate sums crosses the threshold."""
    if window_len < 1:
        raise ValueError(f"window length must be >= 1, got {window_len}")
    lnT = math.log(T)
    th = float(_meta_threshold(np.asarray([window_len], dtype=np.float64), c2, K, lnT)[0])
    return float(np.max(window_sums)) > th


def _replay_grid(T: int) -> tuple[int, ...]:
    if T < 2:
        return ()
    return tuple(2**j for j in range(1, math.ceil(math.log2(T)) + 1))


@dataclass(frozen=True)
class MetaConfig:
    """Episodic elimination settings.

    c2: eviction threshold constant (> 0).
    dyadic_eviction: test only dyadic window lengths ending at the current
        round (default); False scans every window start, for small-T tests.
    replay_lengths: override of the replay duration grid {2, 4, ..., 2^ceil(log2 T)}.
    rng_seed: used when run_meta gets no explicit seed.
    """

    c2: float = 1.0
    dyadic_eviction: bool = True
    replay_lengths: tuple[int, ...] | None = None
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.c2 <= 0:
            raise ValueError(f"C2 must be > 0, got {self.c2}")
        if self.replay_lengths is not None:
            ms = tuple(int(m) for m in self.replay_lengths)
            object.__setattr__(self, "replay_lengths", ms)
            if any(m < 2 or m & (m - 1) for m in ms):
                raise ValueError(f"replay lengths must be powers of two >= 2, got {ms}")
            if any(b <= a for a, b in zip(ms, ms[1:])):
                raise ValueError("replay lengths must be strictly increasing")


def run_meta(env: EnvironmentModel, config: MetaConfig | None = None, seed: int | None = None) -> PolicyTrace:
    """Episodes of nested elimination bases with randomized replays.

    Control flow per round: the deepest (active) base plays uniformly from
    its own arm set; replay indicators for the next round are drawn from a
    keyed counter RNG and the largest firing length spawns a child base over
    a fresh full arm set; at a round whose end returns control to a base
    (no child spawned, or children just expired), that base applies local
    evictions anchored at its own start, global evictions anchored at the
    episode start shrink only the global candidate set, and the episode
    restarts once that set empties. Windows end at the last played round and
    their length counts observed rounds only.
    """
    cfg = config or MetaConfig()
    seed = cfg.rng_seed if seed is None else int(seed)
    K, T = env.K, env.T
    draw = _reward_stream(env, seed)
    rng = make_rng(seed, _STREAM_PLAY)
    lnT = math.log(T)
    ms = np.asarray(cfg.replay_lengths if cfg.replay_lengths is not None else _replay_grid(T), dtype=np.int64)
    win = dyadic_lengths(T) if cfg.dyadic_eviction else None

    PE = np.zeros((K, T + 1), dtype=np.float64)
    pulls = np.zeros(T, dtype=np.int64)
    rewards = np.zeros(T, dtype=np.float64)
    events: list[dict] = []
    full = tuple(range(1, K + 1))

    tau_hat = 1
    a_global = set(full)
    # ancestor base covers the whole remaining horizon: m0 = T + 1 - tau_hat
    stack: list[dict] = [{"tstart": 1, "m0": T, "A": list(full)}]
    viol_cache: dict[int, np.ndarray] = {}

    def violators(anchor: int, r: int) -> np.ndarray:
        got = viol_cache.get(anchor)
        if got is not None:
            return got
        if win is None:
            ns = np.arange(1, r - anchor + 2, dtype=np.int64)
        else:
            ns = np.asarray([n for n in win if r - n + 1 >= anchor], dtype=np.int64)
        if ns.size == 0:
            out = np.zeros(K, dtype=bool)
        else:
            s0 = r - ns + 1
            D = PE[:, r : r + 1] - PE[:, s0 - 1]
            th = _meta_threshold(ns, cfg.c2, K, lnT)
            out = ((D.max(axis=0) - D) > th).any(axis=1)
        viol_cache[anchor] = out
        return out

    r = 0
    while r < T:
        frame = stack[-1]
        if not frame["A"]:
            raise RuntimeError("active base has an empty arm set; containment invariant broken")
        r += 1
        arm = frame["A"][rng.integers(len(frame["A"]))]
        y = draw(r, arm)
        pulls[r - 1] = arm
        rewards[r - 1] = y
        PE[:, r] = PE[:, r - 1]
        PE[arm - 1, r] += len(frame["A"]) * y

        # replay indicators B_{r+1, m} ~ Bernoulli(min(1, 1/sqrt(m (r+1-tau))))
        if r + 1 <= T and ms.size and r + 1 - tau_hat >= 1:
            p = np.minimum(1.0, 1.0 / np.sqrt(ms * (r + 1 - tau_hat)))
            us = keyed_u01((seed, _STREAM_REPLAY, tau_hat, r + 1), ms)
            fired = ms[us < p]
            if fired.size:
                m = int(fired.max())
                events.append({"round": r + 1, "type": "replay_start", "m": m})
                stack.append({"tstart": r + 1, "m0": m, "A": list(full)})
                # the spawning base's eviction step is deferred until the
                # child (and any deeper descendants) finish
                continue

        viol_cache.clear()
        while True:
            f = stack[-1]
            vl = violators(f["tstart"], r)
            if vl.any():
                kept = [a for a in f["A"] if not vl[a - 1]]
                for a in f["A"]:
                    if vl[a - 1]:
                        events.append({"round": r, "type": "eviction", "arm": a, "scope": "local"})
                f["A"] = kept
            vg = violators(tau_hat, r)
            for a in sorted(a_global):
                if vg[a - 1]:
                    a_global.discard(a)
                    events.append({"round": r, "type": "eviction", "arm": a, "scope": "global"})
            if not a_global:
                events.append({"round": r, "type": "episode_restart"})
                if r < T:
                    tau_hat = r + 1
                    a_global = set(full)
                    stack = [{"tstart": tau_hat, "m0": T - r, "A": list(full)}]
                break
            if r + 1 > f["tstart"] + f["m0"]:
                stack.pop()
                if stack:
                    continue  # the resuming parent runs its own eviction step now
                stack = [{"tstart": r + 1, "m0": T - r, "A": list(full)}]  # unreachable, defensive
                break
            break

    return PolicyTrace(pulls=pulls, rewards=rewards, events=events, policy="meta")


def _run_se(
    env: EnvironmentModel,
    c5: float,
    seed: int,
    dyadic_windows: bool,
    phases: list[tuple[int, int]],
    policy_name: str,
) -> tuple[PolicyTrace, EvictionTrace | None]:
    if c5 <= 1.0:
        raise ValueError(f"C5 must exceed 1, got {c5}")
    K, T = env.K, env.T
    draw = _reward_stream(env, seed)
    rng = make_rng(seed, _STREAM_PLAY)
    lnT = math.log(T)
    win = dyadic_lengths(T) if dyadic_windows else None

    pulls = np.zeros(T, dtype=np.int64)
    rewards = np.zeros(T, dtype=np.float64)
    events: list[dict] = []
    PG = np.zeros((K, T + 1), dtype=np.float64)
    V = np.zeros(T + 1, dtype=np.float64)
    evict_at = np.full(K, T + 1, dtype=np.int64)  # first round the arm is out
    changes: list[tuple[int, tuple[int, ...]]] = [(1, tuple(range(1, K + 1)))]

    for p0, p1 in phases:
        if p0 > 1:
            events.append({"round": p0, "type": "episode_restart"})
        A = list(range(1, K + 1))
        for t in range(p0, p1):
            sz = len(A)
            arm = A[rng.integers(sz)]
            y = draw(t, arm)
            pulls[t - 1] = arm
            rewards[t - 1] = y
            PG[:, t] = PG[:, t - 1]
            PG[arm - 1, t] += y / sz
            V[t] = V[t - 1] + lnT / sz
            if sz == 1:
                continue  # the last arm is never evicted
            if win is None:
                ns = np.arange(1, t - p0 + 2, dtype=np.int64)
            else:
                ns = np.asarray([n for n in win if t - n + 1 >= p0], dtype=np.int64)
            s0 = t - ns + 1
            D = PG[:, t : t + 1] - PG[:, s0 - 1]
            th = c5 * np.sqrt(V[t] - V[s0 - 1])
            margins = (D.max(axis=0) - D) - th  # (K, nW)
            viol = [a for a in A if (margins[a - 1] > 0).any()]
            if not viol:
                continue
            if len(viol) == len(A):
                # keep the least-violating arm so the played set never empties
                worst = [float(margins[a - 1].max()) for a in viol]
                viol.pop(int(np.argmin(worst)))
            for a in viol:
                A.remove(a)
                evict_at[a - 1] = t + 1
                events.append({"round": t, "type": "eviction", "arm": a, "scope": "global"})
            if viol and t + 1 <= T and len(phases) == 1:
                changes.append((t + 1, tuple(A)))

    trace = PolicyTrace(pulls=pulls, rewards=rewards, events=events, policy=policy_name)
    if len(phases) != 1:
        return trace, None
    ev = EvictionTrace(times=tuple(sorted(evict_at.tolist())), armsets=tuple(changes), c2=c5)
    return trace, ev


def run_se_safe(
    env: EnvironmentModel,
    c5: float = 2.0,
    seed: int = 0,
    dyadic_windows: bool = True,
) -> tuple[PolicyTrace, EvictionTrace]:
    """One elimination pass over the whole horizon.

    Estimates are unweighted in the pair statistic but window sums weight
    each round by 1/|A_s|: an arm is evicted when some window's
    max_a' sum of (Y(a')1{pi=a'} - Y(a)1{pi=a})/|A_s| exceeds
    c5 sqrt(sum lnT/|A_s|). Returns the realized play trace and the realized
    eviction trace (times are the first round each arm is excluded; T+1 for
    arms surviving through T).
    """
    trace, ev = _run_se(env, c5, seed, dyadic_windows, [(1, env.T + 1)], "se")
    assert ev is not None
    return trace, ev


def run_random(env: EnvironmentModel, seed: int = 0) -> PolicyTrace:
    """Uniform arm each round, oblivious to observations."""
    rng = make_rng(seed, _STREAM_PLAY)
    pulls = rng.integers(1, env.K + 1, size=env.T).astype(np.int64)
    rewards = _rewards_for_pulls(env, seed, pulls)
    return PolicyTrace(pulls=pulls, rewards=rewards, events=[], policy="rand")


def run_oracle_restart(
    env: EnvironmentModel,
    profile: ShiftProfile,
    c5: float = 2.0,
    seed: int = 0,
    dyadic_windows: bool = True,
) -> PolicyTrace:
    """Elimination restarted from scratch at every significant shift."""
    if profile.T != env.T:
        raise ValueError(f"profile horizon {profile.T} != env horizon {env.T}")
    if profile.K != env.K:
        raise ValueError(f"profile K {profile.K} != env K {env.K}")
    trace, _ = _run_se(env, c5, seed, dyadic_windows, profile.phases(), "oracle-restart")
    return trace


POLICY_NAMES = ("meta", "se", "rand", "oracle-restart", "external")


def run_policy(name: str, env: EnvironmentModel, seed: int, **config) -> PolicyTrace:
    """Registry entry point used by the harness and CLI."""
    if name == "meta":
        allowed = {"c2", "dyadic_eviction", "replay_lengths"}
        _check_keys(name, config, allowed)
        rl = config.get("replay_lengths")
        cfg = MetaConfig(
            c2=float(config.get("c2", 1.0)),
            dyadic_eviction=bool(config.get("dyadic_eviction", True)),
            replay_lengths=tuple(rl) if rl is not None else None,
        )
        return run_meta(env, cfg, seed)
    if name == "se":
        _check_keys(name, config, {"c5", "dyadic_windows"})
        trace, _ = run_se_safe(
            env, c5=float(config.get("c5", 2.0)), seed=seed,
            dyadic_windows=bool(config.get("dyadic_windows", True)),
        )
        return trace
    if name == "rand":
        _check_keys(name, config, set())
        return run_random(env, seed)
    if name == "oracle-restart":
        _check_keys(name, config, {"c5", "dyadic_windows", "mode"})
        profile = significant_shifts(env, mode=config.get("mode", "dyadic"))
        return run_oracle_restart(
            env, profile, c5=float(config.get("c5", 2.0)), seed=seed,
            dyadic_windows=bool(config.get("dyadic_windows", True)),
        )
    if name == "external":
        _check_keys(name, config, {"path", "events"})
        if "path" not in config:
            raise ConfigError("external policy needs a 'path' to a trace CSV")
        trace = load_trace(config["path"], config.get("events"))
        if len(trace) != env.T:
            raise ConfigError(f"external trace has {len(trace)} rounds, env horizon is {env.T}")
        if trace.pulls.min() < 1 or trace.pulls.max() > env.K:
            raise ConfigError(f"external trace pulls arms outside [1, {env.K}]")
        return trace
    raise ConfigError(f"unknown policy {name!r}; expected one of {POLICY_NAMES}")


def _check_keys(name: str, config: dict, allowed: set) -> None:
    extra = set(config) - allowed
    if extra:
        raise ConfigError(f"policy {name!r} got unknown options {sorted(extra)}")
