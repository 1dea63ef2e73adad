"""Eviction-time oracle: the idealized elimination schedule a gap-aware
referee would follow, plus the rate and safety checks built on it.

All quantities weight round s by 1/|S_s| where S_s is the surviving armset
IN EFFECT at s (post-eviction: an arm evicted at t is already absent from
S_t). Arm a is evicted at the first round t where some window [s1, t]
violates

    sum_{s=s1}^{t} delta_s(a)/|S_s|  <=  C2 * sqrt(sum_{s=s1}^{t} ln(T)/|S_s|),

so every window contained in [1, t-1] still satisfies the bound for every
arm of S_{t-1}, which is exactly what makes the recorded trace a valid
eviction-time sequence. Because round t's weight depends on the
post-eviction |S_t|, evictions at one round cascade: violators are removed
simultaneously, the round's weight terms are recomputed with the smaller
set, and the window tests repeat until stable.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from ..env.generators import PiecewiseSpec
from ..env.model import EnvironmentModel
from .shifts import DYADIC, EXACT, dyadic_lengths


@dataclass(frozen=True)
class EvictionTrace:
    """Eviction times (sentinel T+1 for survivors) and the RLE armset path."""

    times: tuple[int, ...]
    armsets: tuple[tuple[int, tuple[int, ...]], ...]
    c2: float

    def __post_init__(self) -> None:
        times = tuple(int(t) for t in self.times)
        sets = tuple((int(f), tuple(sorted(int(a) for a in s))) for f, s in self.armsets)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "armsets", sets)
        object.__setattr__(self, "c2", float(self.c2))
        if list(times) != sorted(times):
            raise ValueError("eviction times must be nondecreasing")
        if not sets or sets[0][0] != 1:
            raise ValueError("armsets must start at round 1")
        for (f0, s0), (f1, s1) in zip(sets, sets[1:]):
            if f1 <= f0:
                raise ValueError("armset change rounds must be strictly increasing")
            if not set(s1) < set(s0):
                raise ValueError("armsets must strictly shrink at each change")
        if self.c2 <= 0:
            raise ValueError(f"C2 must be > 0, got {self.c2}")

    @property
    def K(self) -> int:
        return len(self.armsets[0][1])

    def set_at(self, t: int) -> tuple[int, ...]:
        """Surviving arms at round t (post-eviction convention)."""
        i = bisect_right([f for f, _ in self.armsets], t) - 1
        if i < 0:
            raise IndexError(f"round {t} precedes the trace")
        return self.armsets[i][1]

    def spans(self, T: int) -> list[tuple[int, int, tuple[int, ...]]]:
        """(start, end_exclusive, arms) covering rounds 1..T."""
        out = []
        for i, (f, arms) in enumerate(self.armsets):
            nxt = self.armsets[i + 1][0] if i + 1 < len(self.armsets) else T + 1
            if f > T:
                break
            out.append((f, min(nxt, T + 1), arms))
        return out

    def sizes(self, T: int) -> np.ndarray:
        """|S_t| for t = 1..T as an int array."""
        n = np.empty(T, dtype=np.int64)
        for f, to, arms in self.spans(T):
            n[f - 1 : to - 1] = len(arms)
        return n

    def to_dict(self) -> dict:
        return {
            "times": list(self.times),
            "armsets": [{"from": f, "set": list(s)} for f, s in self.armsets],
            "c2": self.c2,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvictionTrace":
        sets = tuple((e["from"], tuple(e["set"])) for e in d["armsets"])
        return cls(times=tuple(d["times"]), armsets=sets, c2=d["c2"])


def eviction_times(env: EnvironmentModel, c2: float = 1.0, mode: str = EXACT) -> EvictionTrace:
    """Greedy forward construction of the eviction-time sequence."""
    if c2 <= 0:
        raise ValueError(f"C2 must be > 0, got {c2}")
    mode = mode.lower()
    if mode not in (EXACT, DYADIC):
        raise ValueError(f"mode must be 'exact' or 'dyadic', got {mode!r}")
    gaps = env.gaps_matrix()
    K, T = env.K, env.T
    lnT = math.log(T)
    lengths = dyadic_lengths(T) if mode == DYADIC else None

    W = np.zeros((K, T + 1), dtype=np.float64)
    V = np.zeros(T + 1, dtype=np.float64)
    alive = np.ones(K, dtype=bool)
    times = np.full(K, T + 1, dtype=np.int64)
    changes: list[tuple[int, tuple[int, ...]]] = [(1, tuple(range(1, K + 1)))]

    for t in range(1, T + 1):
        size = int(alive.sum())
        if size == 0:
            # everything evicted: remaining rounds carry zero weight
            W[:, t:] = W[:, t - 1 : t]
            V[t:] = V[t - 1]
            break
        if lengths is None:
            s1s = np.arange(1, t + 1, dtype=np.int64)
        else:
            s1s = np.asarray([t - L + 1 for L in lengths if t - L + 1 >= 1], dtype=np.int64)
        evicted_here = False
        while True:
            W[:, t] = W[:, t - 1] + gaps[:, t - 1] / size
            V[t] = V[t - 1] + lnT / size
            num = W[:, t : t + 1] - W[:, s1s - 1]
            den = c2 * np.sqrt(V[t] - V[s1s - 1])
            viol = ((num > den).any(axis=1)) & alive
            if not viol.any():
                break
            times[viol] = t
            alive &= ~viol
            evicted_here = True
            size = int(alive.sum())
            if size == 0:
                W[:, t] = W[:, t - 1]
                V[t] = V[t - 1]
                break
        if evicted_here:
            entry = (t, tuple(int(a) for a in np.flatnonzero(alive) + 1))
            if changes[-1][0] == t:  # an eviction in round 1 rewrites the opening set
                changes[-1] = entry
            else:
                changes.append(entry)

    return EvictionTrace(times=tuple(sorted(times.tolist())), armsets=tuple(changes), c2=c2)


def gap_dependent_rate(env: EnvironmentModel, trace: EvictionTrace) -> float:
    """sum_t E_{a ~ Unif(S_t)} delta_t(a); empty-set rounds contribute 0."""
    if trace.K != env.K:
        raise ValueError(f"trace has {trace.K} arms, env has {env.K}")
    gaps = env.gaps_matrix()
    total = 0.0
    for f, to, arms in trace.spans(env.T):
        if not arms:
            continue
        idx = np.asarray(arms, dtype=np.int64) - 1
        total += float(gaps[idx, f - 1 : to - 1].sum()) / len(arms)
    return total


def restarting_oracle_rate(spec: PiecewiseSpec, T: int | None = None) -> float:
    """sum over segments and positive-gap arms of ln(T)/gap (natural log)."""
    if T is None:
        T = spec.T
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    lnT = math.log(T)
    return sum(lnT / g for _, gaps in spec.segments for g in gaps if g > 0)


@dataclass(frozen=True)
class SafeArmReport:
    safe_arms: tuple[int, ...]
    worst_violation: float
    per_arm: tuple[float, ...]  # worst window ratio for each arm 1..K


ArmsetTraj = "EvictionTrace | list[tuple[int, tuple[int, ...]]] | None"


def safe_arm_check(
    env: EnvironmentModel,
    armset_traj=None,
    c3: float = 1.0,
    mode: str = "auto",
) -> SafeArmReport:
    """Which arms satisfy the safe-arm window bound under a shrinking trajectory.

    armset_traj: None (constant full set), an EvictionTrace, or explicit
    (from_round, arms) pairs. For each arm the worst ratio of weighted gap
    sum to c3 * sqrt(weighted log sum) over windows is reported; arms with
    ratio <= 1 are safe. mode "exact" scans all windows, "dyadic" only
    dyadic lengths, "auto" switches on horizon size.
    """
    if c3 <= 0:
        raise ValueError(f"C3 must be > 0, got {c3}")
    K, T = env.K, env.T
    if armset_traj is None:
        sets: list[tuple[int, tuple[int, ...]]] = [(1, tuple(range(1, K + 1)))]
    elif isinstance(armset_traj, EvictionTrace):
        sets = list(armset_traj.armsets)
    else:
        sets = [(int(f), tuple(s)) for f, s in armset_traj]
    if mode == "auto":
        mode = EXACT if T <= 4096 else DYADIC

    sizes = np.empty(T, dtype=np.float64)
    for i, (f, arms) in enumerate(sets):
        if not arms:
            raise ValueError(f"armset trajectory empty from round {f}")
        nxt = sets[i + 1][0] if i + 1 < len(sets) else T + 1
        sizes[f - 1 : min(nxt, T + 1) - 1] = len(arms)
    w = 1.0 / sizes

    gaps = env.gaps_matrix()
    lnT = math.log(T)
    WA = np.zeros((K, T + 1), dtype=np.float64)
    np.cumsum(gaps * w, axis=1, out=WA[:, 1:])
    V = np.zeros(T + 1, dtype=np.float64)
    np.cumsum(lnT * w, out=V[1:])

    lengths = dyadic_lengths(T) if mode == DYADIC else None
    per_arm = np.zeros(K, dtype=np.float64)
    for s2 in range(1, T + 1):
        if lengths is None:
            s1s = np.arange(1, s2 + 1, dtype=np.int64)
        else:
            s1s = np.asarray([s2 - L + 1 for L in lengths if s2 - L + 1 >= 1], dtype=np.int64)
        num = WA[:, s2 : s2 + 1] - WA[:, s1s - 1]
        den = c3 * np.sqrt(V[s2] - V[s1s - 1])
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(den > 0, num / den, np.where(num > 0, np.inf, 0.0))
        np.maximum(per_arm, ratio.max(axis=1), out=per_arm)

    safe = tuple(int(a) for a in range(1, K + 1) if per_arm[a - 1] <= 1.0)
    return SafeArmReport(
        safe_arms=safe,
        worst_violation=float(per_arm.max()),
        per_arm=tuple(float(x) for x in per_arm),
    )
