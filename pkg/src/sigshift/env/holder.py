"""Numerical Hölder-class verification of gap functions.

Gap trajectories are treated as functions of normalized time x in [0,1] via
f_a(x) = delta_{x*T}(a) sampled at exact round multiples. Derivatives come
from order-n finite differences with the standard binomial stencil on a
uniform grid of spacing eta ~ max(1/T, 1/grid_size); np.diff applies exactly
those coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..rng import make_rng
from .model import EnvironmentModel


def _gap_grid(env: EnvironmentModel, a: int, grid_size: int) -> tuple[np.ndarray, float]:
    # Sample every `step` rounds so the positions t/T are exactly uniform.
    # Rounding arbitrary x to rounds would jitter positions by half a round,
    # and that jitter is amplified by eta^-n in n-th differences.
    step = max(1, int(round(env.T / grid_size)))
    t = np.arange(1, env.T + 1, step, dtype=np.int64)
    eta = step / env.T
    f = env.gaps_matrix()[a - 1, t - 1]
    return f, eta


def holder_coefficient(env: EnvironmentModel, a: int, n: int, grid_size: int = 10_000) -> float:
    """max over the grid of the n-th finite-difference derivative of f_a."""
    if n < 0:
        raise ValueError(f"derivative order must be >= 0, got {n}")
    if grid_size < n + 2:
        raise ValueError(f"grid_size={grid_size} too small for an order-{n} stencil")
    if not 1 <= a <= env.K:
        raise IndexError(f"arm {a} outside [1, {env.K}]")
    f, eta = _gap_grid(env, a, grid_size)
    if len(f) < n + 1:
        raise ValueError(f"grid has {len(f)} points, need {n + 1} for an order-{n} stencil")
    d = np.diff(f, n) / eta**n
    return float(np.abs(d).max())


@dataclass(frozen=True)
class HolderReport:
    passed: bool
    worst_ratio: float
    witness: tuple[float, float, int] | None  # (x, x', arm) attaining the worst ratio


def verify_holder(
    env: EnvironmentModel,
    beta: float,
    lam: float,
    sample_pairs: int = 2000,
    tol: float = 0.0,
    grid_size: int = 10_000,
    seed: int = 0,
) -> HolderReport:
    """Check |f^(m)(x) - f^(m)(x')| <= lam |x - x'|^(beta - m) on sampled pairs.

    m = floor(beta). Pairs are all grid pairs at small and dyadic strides
    plus `sample_pairs` seeded random pairs per arm; passing means the worst
    observed ratio is <= 1 + tol. The report's witness names the offending
    pair in normalized time when the check fails (and the worst pair seen
    otherwise).
    """
    if beta <= 0 or lam <= 0:
        raise ValueError(f"beta and lam must be > 0, got beta={beta}, lam={lam}")
    if tol < 0:
        raise ValueError(f"tol must be >= 0, got {tol}")
    m = int(np.floor(beta))
    gamma = beta - m
    rng = make_rng(seed, 0x401D)

    worst = 0.0
    witness: tuple[float, float, int] | None = None
    for a in range(1, env.K + 1):
        f, eta = _gap_grid(env, a, grid_size)
        if len(f) < m + 2:
            raise ValueError(f"grid too small for order-{m} differences")
        d = np.diff(f, m) / eta**m
        # centers of the m-point stencils, so witness coordinates are honest
        xc = (np.arange(len(d)) + m / 2.0) * eta

        strides = list(range(1, min(17, len(d))))
        s = 32
        while s < len(d):
            strides.append(s)
            s *= 2
        for s in strides:
            num = np.abs(d[s:] - d[:-s])
            ratio = num / (lam * (s * eta) ** gamma)
            i = int(np.argmax(ratio))
            if ratio[i] > worst:
                worst = float(ratio[i])
                witness = (float(xc[i + s]), float(xc[i]), a)

        if sample_pairs > 0 and len(d) >= 2:
            ii = rng.integers(0, len(d), size=sample_pairs)
            jj = rng.integers(0, len(d), size=sample_pairs)
            keep = ii != jj
            ii, jj = ii[keep], jj[keep]
            num = np.abs(d[ii] - d[jj])
            dist = np.abs(xc[ii] - xc[jj])
            ratio = num / (lam * dist**gamma)
            if ratio.size:
                i = int(np.argmax(ratio))
                if ratio[i] > worst:
                    worst = float(ratio[i])
                    witness = (float(xc[ii[i]]), float(xc[jj[i]]), a)

    return HolderReport(passed=worst <= 1.0 + tol, worst_ratio=worst, witness=witness)
