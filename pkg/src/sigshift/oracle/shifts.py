"""Ground-truth significant shifts from a fully known gap matrix.

An arm incurs significant regret on a window [s1, s2] when

    sum_{t=s1}^{s2} delta_t(a) >= sqrt(K * (s2 - s1 + 1)).

The shift rounds tau_0 = 1 < tau_1 < ... are defined greedily: tau_{i+1} is
the earliest round tau in (tau_i, T] such that EVERY arm has such a window
[s1, s2] contained in [tau_i, tau]. Because each arm's condition is monotone
in tau, tau_{i+1} equals the max over arms of the earliest flagged window
end with start >= tau_i, which is what both scanners compute.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..env.model import EnvironmentModel

EXACT = "exact"
DYADIC = "dyadic"

# strategy auto-switch: the index strategy precomputes flagged window ends
# per (arm, length) which costs O(K log T) vectorized passes over T rounds
# up front; the rescan strategy pays per phase instead and wins at huge T
_INDEX_CELL_BUDGET = 6e7


@dataclass(frozen=True)
class ShiftProfile:
    """Ordered shift rounds, tau_0 = 1 first; the sentinel T+1 is implicit."""

    shifts: tuple[int, ...]
    T: int
    K: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "shifts", tuple(int(s) for s in self.shifts))
        object.__setattr__(self, "T", int(self.T))
        object.__setattr__(self, "K", int(self.K))
        s = self.shifts
        if not s or s[0] != 1:
            raise ValueError(f"profile must start at round 1, got {s[:1]}")
        if any(b <= a for a, b in zip(s, s[1:])):
            raise ValueError("shift rounds must be strictly increasing")
        if s[-1] > self.T:
            raise ValueError(f"last shift {s[-1]} beyond horizon {self.T}")
        if self.K < 1 or self.T < 1:
            raise ValueError("need K >= 1 and T >= 1")

    @property
    def count(self) -> int:
        """Number of significant shifts (phases minus one)."""
        return len(self.shifts) - 1

    @property
    def sentinel(self) -> int:
        return self.T + 1

    def boundaries(self) -> tuple[int, ...]:
        """Shift rounds plus the sentinel: phase i is [b[i], b[i+1])."""
        return self.shifts + (self.T + 1,)

    def phases(self) -> list[tuple[int, int]]:
        b = self.boundaries()
        return list(zip(b[:-1], b[1:]))

    def to_dict(self) -> dict:
        return {"shifts": list(self.shifts), "T": self.T, "K": self.K}

    @classmethod
    def from_dict(cls, d: dict) -> "ShiftProfile":
        return cls(shifts=tuple(d["shifts"]), T=d["T"], K=d["K"])


def dyadic_lengths(T: int) -> list[int]:
    """Window lengths 1, 2, 4, ..., 2^ceil(log2 T), truncated to fit T."""
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    top = 2 ** math.ceil(math.log2(T)) if T > 1 else 1
    return [L for L in (2**j for j in range(top.bit_length())) if L <= T]


def has_significant_regret(env: EnvironmentModel, a: int, s1: int, s2: int) -> bool:
    """Exact window test via the gap row; closed interval [s1, s2]."""
    if not 1 <= s1 <= s2 <= env.T:
        raise IndexError(f"window [{s1}, {s2}] outside [1, {env.T}]")
    if not 1 <= a <= env.K:
        raise IndexError(f"arm {a} outside [1, {env.K}]")
    total = float(env.gaps_matrix()[a - 1, s1 - 1 : s2].sum())
    return total >= math.sqrt(env.K * (s2 - s1 + 1))


def _prefix(gaps: np.ndarray) -> np.ndarray:
    K, T = gaps.shape
    P = np.zeros((K, T + 1), dtype=np.float64)
    np.cumsum(gaps, axis=1, out=P[:, 1:])
    return P


def _earliest_flag_exact(p: np.ndarray, tau: int, K: int, T: int, budget: int) -> int | None:
    """Earliest window end e >= tau such that some [s1, e] with s1 >= tau flags.

    Maintains the monotone candidate set of starts: a start whose margin
    sum - sqrt(K len) is dominated by an older (longer-window) start stays
    dominated at every later end, because the penalty difference between the
    two shrinks as both windows grow. Candidates are pruned to strict
    running-maximum survivors; if the structure outgrows `budget` the scan
    falls back to testing every start per end.
    """
    fK = float(K)
    cap = T - tau + 2
    cs = np.empty(cap, dtype=np.int64)
    cp = np.empty(cap, dtype=np.float64)
    n = 0
    pruned = True
    for e in range(tau, T + 1):
        if pruned:
            cs[n] = e
            cp[n] = p[e - 1]
            n += 1
            lens = np.int64(e + 1) - cs[:n]
            diff = p[e] - cp[:n]
            thresh = np.sqrt(fK * lens)
            if (diff >= thresh).any():
                return e
            if n > budget:
                pruned = False
                continue
            # drop candidates dominated by an older one; the 1e-12 margin
            # keeps float ties from pruning a potential future argmax
            score = diff - thresh
            mx = np.maximum.accumulate(score)
            keep = np.empty(n, dtype=bool)
            keep[0] = True
            keep[1:] = score[1:] > mx[:-1] - 1e-12
            if not keep.all():
                kept = int(keep.sum())
                cs[:kept] = cs[:n][keep]
                cp[:kept] = cp[:n][keep]
                n = kept
        else:
            lens = np.arange(e - tau + 1, 0, -1, dtype=np.int64)
            diff = p[e] - p[tau - 1 : e]
            if (diff >= np.sqrt(fK * lens)).any():
                return e
    return None


def _earliest_flag_dyadic(p: np.ndarray, tau: int, K: int, T: int, lengths: list[int]) -> int | None:
    best: int | None = None
    for L in lengths:
        lo = tau + L - 1
        if lo > T or (best is not None and lo > best):
            continue
        hi = T if best is None else best  # earlier candidates can't improve past best
        seg = p[lo : hi + 1] - p[lo - L : hi + 1 - L]
        flags = seg >= math.sqrt(K * L)
        if flags.any():
            e = lo + int(np.argmax(flags))
            if best is None or e < best:
                best = e
    return best


def significant_shifts(
    env: EnvironmentModel,
    mode: str = DYADIC,
    strategy: str = "auto",
    full_scan_budget: int = 4096,
) -> ShiftProfile:
    """Scan the whole horizon into a ShiftProfile.

    mode "exact" tests every window; "dyadic" only windows of dyadic length
    (1, 2, 4, ...), matching the experimental variant. Dyadic strategies:
    "index" precomputes flagged ends per (arm, length) and walks monotone
    pointers across phases, "rescan" rescans the suffix per phase, "auto"
    picks by a work estimate.
    """
    mode = mode.lower()
    if mode not in (EXACT, DYADIC):
        raise ValueError(f"mode must be 'exact' or 'dyadic', got {mode!r}")
    gaps = env.gaps_matrix()
    K, T = env.K, env.T
    P = _prefix(gaps)
    shifts = [1]
    tau = 1

    if mode == EXACT:
        while True:
            es = []
            for a in range(K):
                e = _earliest_flag_exact(P[a], tau, K, T, full_scan_budget)
                if e is None:
                    return ShiftProfile(tuple(shifts), T, K)
                es.append(e)
            tau = max(tau + 1, max(es))
            shifts.append(tau)

    lengths = dyadic_lengths(T)
    if strategy == "auto":
        strategy = "index" if K * len(lengths) * T <= _INDEX_CELL_BUDGET else "rescan"
    if strategy == "index":
        ends: list[list[np.ndarray]] = []
        ptrs: list[list[int]] = []
        for a in range(K):
            row_ends = []
            for L in lengths:
                flagged = np.flatnonzero(P[a, L:] - P[a, :-L] >= math.sqrt(K * L)).astype(np.int64) + L
                row_ends.append(flagged)
            ends.append(row_ends)
            ptrs.append([0] * len(lengths))
        while True:
            es = []
            for a in range(K):
                e_a: int | None = None
                for j, L in enumerate(lengths):
                    arr = ends[a][j]
                    k = ptrs[a][j]
                    lo = tau + L - 1
                    while k < len(arr) and arr[k] < lo:
                        k += 1
                    ptrs[a][j] = k
                    if k < len(arr) and (e_a is None or arr[k] < e_a):
                        e_a = int(arr[k])
                if e_a is None:
                    return ShiftProfile(tuple(shifts), T, K)
                es.append(e_a)
            tau = max(tau + 1, max(es))
            shifts.append(tau)
    elif strategy == "rescan":
        while True:
            es = []
            for a in range(K):
                e = _earliest_flag_dyadic(P[a], tau, K, T, lengths)
                if e is None:
                    return ShiftProfile(tuple(shifts), T, K)
                es.append(e)
            tau = max(tau + 1, max(es))
            shifts.append(tau)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")


def phase_rate(profile: ShiftProfile, K: int | None = None) -> float:
    """sum_i sqrt(K * (tau_{i+1} - tau_i)) over all phases, sentinel included."""
    if K is None:
        K = profile.K
    b = np.asarray(profile.boundaries(), dtype=np.float64)
    return float(np.sqrt(K * np.diff(b)).sum())
