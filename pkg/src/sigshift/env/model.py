"""Environment model: time-varying arm means, gaps, and reward noise.

Rounds t and arms a are 1-based throughout, matching the math everywhere
else in the package; dense matrices are 0-indexed shifts of the same data.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

BERNOULLI = "bernoulli"
GAUSSIAN = "gaussian"
DETERMINISTIC = "deterministic"

_NOISE_KINDS = (BERNOULLI, GAUSSIAN, DETERMINISTIC)

MeanFn = Callable[[np.ndarray, int], np.ndarray]


@dataclass(frozen=True)
class NoiseModel:
    """Reward noise attached to an environment.

    kind: "bernoulli", "gaussian", or "deterministic".
    variance: Gaussian variance (ignored otherwise).
    clip: clip Gaussian rewards to [0,1]; default off, the benchmark
        experiments use unclipped Gaussian noise despite the [0,1] model.
    """

    kind: str
    variance: float = 0.0
    clip: bool = False

    def __post_init__(self) -> None:
        if self.kind not in _NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}, expected one of {_NOISE_KINDS}")
        if not np.isfinite(self.variance) or self.variance < 0:
            raise ValueError(f"noise variance must be finite and >= 0, got {self.variance}")
        if self.kind != GAUSSIAN and self.variance != 0.0:
            raise ValueError(f"variance is only meaningful for gaussian noise, got kind={self.kind!r}")

    @classmethod
    def bernoulli(cls) -> "NoiseModel":
        return cls(BERNOULLI)

    @classmethod
    def gaussian(cls, variance: float, clip: bool = False) -> "NoiseModel":
        return cls(GAUSSIAN, variance=variance, clip=clip)

    @classmethod
    def deterministic(cls) -> "NoiseModel":
        return cls(DETERMINISTIC)


class EnvironmentModel:
    """Mean rewards mu_t(a) for arms a in [1,K] over rounds t in [1,T].

    Means are evaluated through a vectorized closure; the dense K x T matrix
    (and the derived gap matrix) is materialized once on first use and cached
    read-only, so a constructed environment is immutable and safe to share
    across workers.
    """

    def __init__(
        self,
        K: int,
        T: int,
        mean_fn: MeanFn,
        noise: NoiseModel,
        materialized: np.ndarray | None = None,
        meta: Mapping[str, object] | None = None,
    ) -> None:
        if K < 2:
            raise ValueError(f"need at least 2 arms, got K={K}")
        if T < 1:
            raise ValueError(f"horizon must be >= 1, got T={T}")
        self.K = int(K)
        self.T = int(T)
        self.noise = noise
        self.meta: dict[str, object] = dict(meta or {})
        self._mean_fn = mean_fn
        self._means: np.ndarray | None = None
        self._gaps: np.ndarray | None = None
        if materialized is not None:
            m = np.ascontiguousarray(materialized, dtype=np.float64)
            if m.shape != (self.K, self.T):
                raise ValueError(f"materialized means must have shape ({K}, {T}), got {m.shape}")
            m.flags.writeable = False
            self._means = m

    @classmethod
    def from_means(
        cls,
        means: np.ndarray,
        noise: NoiseModel,
        meta: Mapping[str, object] | None = None,
    ) -> "EnvironmentModel":
        means = np.asarray(means, dtype=np.float64)
        if means.ndim != 2:
            raise ValueError(f"means must be a K x T matrix, got ndim={means.ndim}")
        if not np.isfinite(means).all():
            raise ValueError("means must be finite")
        K, T = means.shape

        def mean_fn(ts: np.ndarray, arm: int) -> np.ndarray:
            return means[arm - 1, np.asarray(ts) - 1]

        return cls(K, T, mean_fn, noise, materialized=means, meta=meta)

    def means_matrix(self) -> np.ndarray:
        """Dense K x T mean matrix, cached and read-only."""
        if self._means is None:
            ts = np.arange(1, self.T + 1, dtype=np.int64)
            m = np.empty((self.K, self.T), dtype=np.float64)
            for a in range(1, self.K + 1):
                m[a - 1] = self._mean_fn(ts, a)
            m.flags.writeable = False
            self._means = m
        return self._means

    def gaps_matrix(self) -> np.ndarray:
        """Dense K x T gap matrix delta_t(a) = max_a' mu_t(a') - mu_t(a)."""
        if self._gaps is None:
            m = self.means_matrix()
            g = m.max(axis=0, keepdims=True) - m
            g.flags.writeable = False
            self._gaps = g
        return self._gaps

    def mean(self, t: int, a: int) -> float:
        self._check_index(t, a)
        if self._means is not None:
            return float(self._means[a - 1, t - 1])
        return float(self._mean_fn(np.asarray([t], dtype=np.int64), a)[0])

    def _check_index(self, t: int, a: int) -> None:
        if not 1 <= t <= self.T:
            raise IndexError(f"round {t} outside [1, {self.T}]")
        if not 1 <= a <= self.K:
            raise IndexError(f"arm {a} outside [1, {self.K}]")

    def __repr__(self) -> str:
        kind = self.meta.get("kind", "custom")
        return f"EnvironmentModel(K={self.K}, T={self.T}, kind={kind!r}, noise={self.noise.kind})"


def gap_at(env: EnvironmentModel, t: int, a: int) -> float:
    """Absolute gap delta_t(a) = max_a' mu_t(a') - mu_t(a), always >= 0."""
    env._check_index(t, a)
    if env._gaps is not None:
        return float(env._gaps[a - 1, t - 1])
    ts = np.asarray([t], dtype=np.int64)
    col = np.array([env._mean_fn(ts, b)[0] for b in range(1, env.K + 1)])
    return float(col.max() - col[a - 1])


def sample_reward(env: EnvironmentModel, t: int, a: int, rng: np.random.Generator) -> float:
    """One reward draw Y_t(a) from the environment's noise model."""
    mu = env.mean(t, a)
    noise = env.noise
    if noise.kind == DETERMINISTIC:
        return mu
    if noise.kind == BERNOULLI:
        if not 0.0 <= mu <= 1.0:
            raise ValueError(f"Bernoulli mean {mu} outside [0,1] at (t={t}, a={a})")
        return float(rng.random() < mu)
    y = mu + rng.normal(0.0, np.sqrt(noise.variance))
    if noise.clip:
        y = min(1.0, max(0.0, y))
    return float(y)
