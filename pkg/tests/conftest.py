"""Shared environment corpora and fixtures.

Corpora are deterministic functions of hard-coded seeds so every run (and the
acceptance gate) sees the same environments.
"""
from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from sigshift import EnvironmentModel, NoiseModel, PiecewiseSpec, make_piecewise
from sigshift.rng import make_rng

settings.register_profile(
    "suite",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def _matrix_env(means: np.ndarray, tag: str) -> EnvironmentModel:
    env = EnvironmentModel.from_means(means, NoiseModel.deterministic())
    env.meta["tag"] = tag
    return env


def build_random_corpus() -> list[EnvironmentModel]:
    """>= 50 small randomized environments (T <= 300, K <= 4) spanning iid
    matrices, alternating piecewise, smooth drift, and degenerate cases."""
    envs: list[EnvironmentModel] = []

    # 20 iid uniform mean matrices: gaps large enough that shifts accumulate.
    for i in range(20):
        rng = make_rng(0xC0FFEE, i)
        K = int(rng.integers(2, 5))
        T = int(rng.integers(40, 301))
        envs.append(_matrix_env(rng.random((K, T)), f"iid-{i}"))

    # 15 piecewise environments with the best arm rotating per segment.
    for i in range(15):
        rng = make_rng(0xA17E12, i)
        K = int(rng.integers(2, 5))
        n_seg = int(rng.integers(2, 7))
        segs = []
        for j in range(n_seg):
            length = int(rng.integers(15, 70))
            gaps = rng.uniform(0.3, 0.9, size=K)
            gaps[(i + j) % K] = 0.0
            segs.append((length, tuple(float(g) for g in gaps)))
        spec = PiecewiseSpec(segments=tuple(segs), baseline=1.0)
        env = make_piecewise(spec, NoiseModel.deterministic())
        envs.append(env)

    # 10 smooth sinusoidal drifts of varying frequency and amplitude.
    for i in range(10):
        rng = make_rng(0x51DE, i)
        K = int(rng.integers(2, 4))
        T = int(rng.integers(80, 301))
        ts = np.arange(1, T + 1) / T
        rows = [
            0.5 + 0.4 * np.sin(2 * np.pi * rng.uniform(1, 6) * ts + rng.uniform(0, 6))
            for _ in range(K)
        ]
        envs.append(_matrix_env(np.vstack(rows), f"smooth-{i}"))

    # Degenerate cases: no drift, zero gaps, one flip, near-threshold gaps.
    envs.append(_matrix_env(np.tile([[0.8], [0.3]], (1, 120)), "constant"))
    envs.append(_matrix_env(np.full((3, 100), 0.5), "all-equal"))
    flip = np.zeros((2, 150))
    flip[0, :75], flip[1, :75] = 0.9, 0.1
    flip[0, 75:], flip[1, 75:] = 0.1, 0.9
    envs.append(_matrix_env(flip, "one-flip"))
    near = np.zeros((2, 140))
    near[0], near[1] = 1.0, 1.0 - np.sqrt(2.0 / 140.0)  # right at the window threshold
    envs.append(_matrix_env(near, "near-threshold"))
    spiky = np.full((4, 90), 0.5)
    spiky[:, 44] = [1.0, 0.0, 0.0, 0.0]
    envs.append(_matrix_env(spiky, "one-spike"))

    assert len(envs) >= 50
    return envs


def build_safe_corpus() -> list[tuple[EnvironmentModel, PiecewiseSpec]]:
    """>= 20 piecewise environments at T = 10^4 with a persistent zero-gap
    arm; gaps of the other arms sit in {0} or [0.15, 0.6] per segment."""
    out = []
    for i in range(20):
        rng = make_rng(0x5AFE, i)
        K = int(rng.integers(2, 6))
        n_seg = int(rng.integers(1, 7))
        if n_seg > 1:
            cuts = np.sort(rng.choice(np.arange(1, 20), size=n_seg - 1, replace=False))
        else:
            cuts = np.array([], dtype=int)
        # distinct cuts in 1..19 make every weight >= 1, so segments >= 500
        lengths = np.diff(np.concatenate(([0], cuts, [20]))) * 500
        segs = []
        for j in range(n_seg):
            gaps = np.where(rng.random(K) < 0.25, 0.0, rng.uniform(0.15, 0.6, size=K))
            gaps[0] = 0.0
            segs.append((int(lengths[j]), tuple(float(g) for g in gaps)))
        spec = PiecewiseSpec(segments=tuple(segs), baseline=1.0)
        out.append((make_piecewise(spec, NoiseModel.deterministic()), spec))
    return out


@pytest.fixture(scope="session")
def random_corpus():
    return build_random_corpus()


@pytest.fixture(scope="session")
def safe_corpus():
    return build_safe_corpus()


@pytest.fixture()
def tiny_trig():
    from sigshift import TrigParams, make_trig

    return make_trig(TrigParams(A=0.3, nu=3.0, phi=0.7, T=400), NoiseModel.deterministic())


@pytest.fixture()
def step_env():
    """Discontinuous gap curve: the canonical smoothness counterexample."""
    means = np.full((2, 1000), 0.5)
    means[1, 500:] = 0.1
    return _matrix_env(means, "step")
