"""Deterministic seed derivation and counter-based uniform draws.

Seeding discipline: every random quantity in the package is derived from a
single integer master seed through `mix64`, a SplitMix64 finalizer chained
over key words. Derived seeds feed `numpy.random.Generator(PCG64(...))`
streams; schedule draws that must not depend on consumption order (replay
Bernoullis) instead hash (seed, tag, anchor, round, counter) tuples directly
via `keyed_u01`.
"""
from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB


def _finalize(x: int) -> int:
    x = ((x ^ (x >> 30)) * _MIX_A) & _MASK
    x = ((x ^ (x >> 27)) * _MIX_B) & _MASK
    return x ^ (x >> 31)


def mix64(*words: int) -> int:
    """Hash integer words into one 64-bit value.

    Each word advances a SplitMix64 state and the finalizer is applied after
    every step, so prefixes act as independent keys: mix64(a, b) shares no
    structure with mix64(a, c). mix64(0) reproduces the canonical SplitMix64
    first output for seed 0.
    """
    x = 0
    for w in words:
        x = _finalize((x + (int(w) & _MASK) + _GOLDEN) & _MASK)
    return x


def keyed_u01(prefix: tuple[int, ...], counters: np.ndarray) -> np.ndarray:
    """Uniform [0,1) draws addressed by (prefix..., counter), order-free.

    Vectorized over `counters`. The same (prefix, counter) pair always yields
    the same float, regardless of how many draws happened before it.
    """
    base = np.uint64(mix64(*prefix))
    arr = np.asarray(counters, dtype=np.uint64)
    c = np.atleast_1d(arr)
    x = base + c + np.uint64(_GOLDEN)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_MIX_A)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_MIX_B)
    x = x ^ (x >> np.uint64(31))
    # 53 high-order bits, same construction numpy uses for float64 uniforms
    u = (x >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
    return u[0] if arr.ndim == 0 else u


def make_rng(*words: int) -> np.random.Generator:
    """PCG64 stream keyed by the mixed words."""
    return np.random.Generator(np.random.PCG64(mix64(*words)))
