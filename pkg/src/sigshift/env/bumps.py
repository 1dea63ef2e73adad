"""Smooth bump shape used by the hard-instance generator.

The mother bump is Phi(u) = exp(-1/(1-u^2)) on |u| < 1 and 0 outside:
infinitely differentiable with every derivative vanishing at the support
boundary, which is what lets per-segment bumps concatenate into a globally
smooth gap function. All derivative evaluation here is exact up to float
rounding: Phi^(n)(u) = P_n(u) / (1-u^2)^(2n) * Phi(u) with the polynomials
P_n generated by the recursion

    P_0 = 1,   P_{n+1} = P_n' * (1-u^2)^2 + (4*n*u*(1-u^2) - 2*u) * P_n.
"""
from __future__ import annotations

import functools
import math

import numpy as np
from numpy.polynomial import Polynomial

PHI_AT_ZERO = math.exp(-1.0)


def bump(u: np.ndarray | float) -> np.ndarray:
    """Phi(u) = exp(-1/(1-u^2)) on |u| < 1, zero outside."""
    u = np.asarray(u, dtype=np.float64)
    inside = np.abs(u) < 1.0
    out = np.zeros_like(u)
    with np.errstate(divide="ignore", over="ignore"):
        out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


def unit_shape(u: np.ndarray | float) -> np.ndarray:
    """Phi scaled to peak 1: S(u) = Phi(u)/Phi(0) = exp(1 - 1/(1-u^2))."""
    return bump(u) / PHI_AT_ZERO


@functools.lru_cache(maxsize=64)
def _deriv_poly(n: int) -> Polynomial:
    if n == 0:
        return Polynomial([1.0])
    p = _deriv_poly(n - 1)
    u = Polynomial([0.0, 1.0])
    w = Polynomial([1.0, 0.0, -1.0])  # 1 - u^2
    return p.deriv() * w * w + (4.0 * (n - 1) * u * w - 2.0 * u) * p


def unit_shape_derivative(u: np.ndarray | float, n: int) -> np.ndarray:
    """n-th derivative of the unit shape S, exact formula, zero for |u| >= 1.

    Evaluated in log space so the exp(-1/(1-u^2)) / (1-u^2)^(2n) product
    underflows cleanly to 0 near the boundary instead of producing 0/0.
    """
    if n < 0:
        raise ValueError("derivative order must be >= 0")
    u = np.atleast_1d(np.asarray(u, dtype=np.float64))
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    if not inside.any():
        return out
    ui = u[inside]
    w = 1.0 - ui**2
    p = _deriv_poly(n)(ui)
    with np.errstate(divide="ignore"):
        logmag = 1.0 - 1.0 / w - 2.0 * n * np.log(w) + np.log(np.abs(p), where=p != 0, out=np.full_like(ui, -np.inf))
    out[inside] = np.sign(p) * np.exp(logmag)
    return out


def _pair_seminorm(d: np.ndarray, du: float, gamma: float) -> float:
    # gamma = 0 means the class bounds |f(x) - f(x')| itself: oscillation.
    if gamma == 0.0:
        return float(d.max() - d.min())
    best = 0.0
    for s in range(1, d.size):
        diff = float(np.abs(d[s:] - d[:-s]).max())
        if diff == 0.0:
            continue
        best = max(best, diff / (s * du) ** gamma)
    return best


@functools.lru_cache(maxsize=64)
def pattern_seminorm(beta: float, grid: int = 2049) -> float:
    """Worst Hölder ratio of the m-th derivative over bump concatenations.

    Scans two patterns in bump-local units u: a lone bump S(u) with zero
    tails, and two adjacent bumps S(u) + S(u-2), both over u in [-1, 3].
    Every pair of points in a full bump instance restricts to one of these
    patterns (possibly mirrored) when the pair spans at most two segments,
    and farther pairs are dominated by the oscillation pair inside one bump,
    so the max over both patterns bounds the instance's true constant.
    """
    m = math.floor(beta)
    gamma = beta - m
    u = np.linspace(-1.0, 3.0, grid)
    du = float(u[1] - u[0])
    lone = unit_shape_derivative(u, m)
    pair = lone + unit_shape_derivative(u - 2.0, m)
    return max(_pair_seminorm(lone, du, gamma), _pair_seminorm(pair, du, gamma))


def middle_region_min(half_width_mode: str, grid: int = 2049) -> float:
    """min of S over the middle half of a segment, in segment coordinates.

    For half-width b = h/2 the middle half of a segment maps to |u| <= 1/2;
    for the literal half-width b = h it maps to |u| <= 1/4.
    """
    lim = 0.5 if half_width_mode == "disjoint" else 0.25
    u = np.linspace(-lim, lim, grid)
    return float(unit_shape(u).min())
