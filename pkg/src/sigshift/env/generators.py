"""Environment generators: trigonometric drift, smooth bump hard instances,
and piecewise-stationary gap profiles."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import GeneratorRejection
from ..rng import make_rng
from .bumps import middle_region_min, pattern_seminorm, unit_shape
from .model import BERNOULLI, EnvironmentModel, NoiseModel

DISJOINT_WIDTH = "disjoint"
PAPER_WIDTH = "paper"


@dataclass(frozen=True)
class TrigParams:
    """Two-arm drifting sine benchmark: mu_1 = A, mu_2(t) = A - A sin(2 pi nu t/T + phi)."""

    A: float
    nu: float
    phi: float
    T: int

    def __post_init__(self) -> None:
        for name in ("A", "nu", "phi"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "T", int(self.T))
        if self.T < 1:
            raise GeneratorRejection(f"horizon must be >= 1, got T={self.T}")
        if not np.isfinite([self.A, self.nu, self.phi]).all():
            raise GeneratorRejection("trig parameters must be finite")
        if self.A < 0:
            raise GeneratorRejection(f"amplitude must be >= 0, got A={self.A}")
        if not 0.0 <= self.phi <= 2.0 * math.pi:
            raise GeneratorRejection(f"phase must lie in [0, 2*pi], got phi={self.phi}")


def make_trig(params: TrigParams, noise: NoiseModel) -> EnvironmentModel:
    """Two-arm environment with a stationary arm and a sinusoidally drifting one.

    Arm 2's mean sweeps [0, 2A], so 2A <= 1 is required to keep means in
    [0,1] (the range is enforced for every noise kind; generated instances
    promise bounded means regardless of how rewards are drawn).
    """
    A, nu, phi, T = params.A, params.nu, params.phi, params.T
    if 2.0 * A > 1.0:
        raise GeneratorRejection(f"means reach 2A={2 * A} > 1; amplitude too large for the [0,1] model")

    def mean_fn(ts: np.ndarray, arm: int) -> np.ndarray:
        if arm == 1:
            return np.full(len(ts), A)
        return A - A * np.sin(2.0 * math.pi * nu * ts / T + phi)

    meta = {"kind": "trig", "A": A, "nu": nu, "phi": phi}
    return EnvironmentModel(2, T, mean_fn, noise, meta=meta)


@dataclass(frozen=True)
class PiecewiseSpec:
    """Stationary segments: (length, per-arm gap profile) with best-arm level `baseline`."""

    segments: tuple[tuple[int, tuple[float, ...]], ...]
    baseline: float = 1.0

    def __post_init__(self) -> None:
        segs = tuple((int(n), tuple(float(g) for g in gaps)) for n, gaps in self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise GeneratorRejection("need at least one segment")
        K = len(segs[0][1])
        if K < 2:
            raise GeneratorRejection(f"need at least 2 arms, got {K}")
        for i, (n, gaps) in enumerate(segs):
            if n < 1:
                raise GeneratorRejection(f"segment {i + 1} has length {n} < 1")
            if len(gaps) != K:
                raise GeneratorRejection(f"segment {i + 1} has {len(gaps)} gaps, expected {K}")
            if min(gaps) != 0.0:
                raise GeneratorRejection(f"segment {i + 1} has no zero-gap arm")
            if any(g < 0 or not np.isfinite(g) for g in gaps):
                raise GeneratorRejection(f"segment {i + 1} has a negative or non-finite gap")
            if self.baseline - max(gaps) < 0:
                raise GeneratorRejection(
                    f"segment {i + 1}: baseline {self.baseline} minus gap {max(gaps)} drops below 0"
                )
        if not 0.0 <= self.baseline <= 1.0:
            raise GeneratorRejection(f"baseline must lie in [0,1], got {self.baseline}")

    @property
    def K(self) -> int:
        return len(self.segments[0][1])

    @property
    def T(self) -> int:
        return sum(n for n, _ in self.segments)


def make_piecewise(spec: PiecewiseSpec, noise: NoiseModel) -> EnvironmentModel:
    """Means constant per segment: mu = baseline - gap, best arm at baseline."""
    K, T = spec.K, spec.T
    bounds = np.cumsum([n for n, _ in spec.segments])  # segment i covers rounds (bounds[i-1], bounds[i]]
    gap_table = np.array([gaps for _, gaps in spec.segments], dtype=np.float64)

    def mean_fn(ts: np.ndarray, arm: int) -> np.ndarray:
        seg = np.searchsorted(bounds, np.asarray(ts), side="left")
        return spec.baseline - gap_table[seg, arm - 1]

    meta = {"kind": "piecewise", "spec": spec}
    return EnvironmentModel(K, T, mean_fn, noise, meta=meta)


@dataclass(frozen=True)
class BumpParams:
    """Parameters of the smooth hard instance; lam_tilde, M, h derive in construction.

    assignment: "uniform" (seeded i.i.d. best arms), "round_robin", or an
    explicit length-M sequence of arms in [1, K].
    half_width_mode: "disjoint" centers each bump with half-width h/2 so
    supports stay inside segments; "paper" keeps the literal half-width h
    truncated to the segment (discontinuous at boundaries, comparison only).
    """

    beta: float
    lam: float
    K: int
    T: int
    assignment: str | tuple[int, ...] = "uniform"
    seed: int = 0
    half_width_mode: str = DISJOINT_WIDTH
    lam_tilde: float = field(init=False)
    M: int = field(init=False)
    h: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "K", int(self.K))
        object.__setattr__(self, "T", int(self.T))
        object.__setattr__(self, "seed", int(self.seed))
        if self.beta <= 0 or self.lam <= 0:
            raise GeneratorRejection(f"beta and lam must be > 0, got beta={self.beta}, lam={self.lam}")
        if self.K < 2 or self.T < 1:
            raise GeneratorRejection(f"need K >= 2 and T >= 1, got K={self.K}, T={self.T}")
        if self.half_width_mode not in (DISJOINT_WIDTH, PAPER_WIDTH):
            raise GeneratorRejection(f"unknown half_width_mode {self.half_width_mode!r}")
        # Trivial-case exclusions: otherwise M outgrows the horizon and the
        # instance degenerates instead of being hard.
        if self.K > self.T / 4:
            raise GeneratorRejection(f"K={self.K} exceeds T/4={self.T / 4}; too few rounds per arm")
        if self.lam < math.sqrt(self.K / self.T):
            raise GeneratorRejection(
                f"lam={self.lam} below sqrt(K/T)={math.sqrt(self.K / self.T):.6g}; drift budget below the static floor"
            )
        b, l, K, T = self.beta, self.lam, self.K, self.T
        lam_tilde = min(2.0 ** -(2 * b + 1) * (T / K) ** b, l)
        # round before ceil so an analytically integer M is not bumped by
        # float error in the power chain
        m_raw = T ** (1.0 / (2 * b + 1)) * K ** (-1.0 / (2 * b + 1)) * lam_tilde ** (2.0 / (2 * b + 1))
        M = math.ceil(round(m_raw, 9))
        if M > T:
            raise GeneratorRejection(f"segment count M={M} exceeds T={self.T}")
        if isinstance(self.assignment, str):
            if self.assignment not in ("uniform", "round_robin"):
                raise GeneratorRejection(f"unknown assignment rule {self.assignment!r}")
        else:
            arms = tuple(int(a) for a in self.assignment)
            object.__setattr__(self, "assignment", arms)
            if len(arms) != M:
                raise GeneratorRejection(f"assignment length {len(arms)} != M={M}")
            if any(not 1 <= a <= K for a in arms):
                raise GeneratorRejection("assignment arms must lie in [1, K]")
        object.__setattr__(self, "lam_tilde", float(lam_tilde))
        object.__setattr__(self, "M", int(M))
        object.__setattr__(self, "h", 1.0 / M)


def resolve_assignment(params: BumpParams) -> np.ndarray:
    """Best arm per segment as an int array of length M (1-based arms)."""
    if isinstance(params.assignment, tuple):
        return np.asarray(params.assignment, dtype=np.int64)
    if params.assignment == "round_robin":
        return np.arange(params.M, dtype=np.int64) % params.K + 1
    rng = make_rng(params.seed, 0xB0)
    return rng.integers(1, params.K + 1, size=params.M).astype(np.int64)


def make_bump_instance(params: BumpParams, noise: NoiseModel) -> EnvironmentModel:
    """Hard instance: M segments, one bump per segment around mean 1/2.

    In segment i the assigned best arm has mean 1/2 + phi_i(t/T0) and all
    other arms 1/2 - phi_i(t/T0), so the non-best gap is 2 phi_i. The
    amplitude is capped so the whole gap function provably stays inside the
    (beta, lam) Hölder ball: amp <= lam * b^beta / (2 * S_beta) with S_beta
    the numerically computed worst Hölder ratio over bump concatenations.
    """
    M, h, lam_tilde = params.M, params.h, params.lam_tilde
    T0 = M * (params.T // M)
    assert T0 >= params.T / 2, "effective horizon dropped below T/2"
    seg_len = T0 // M
    assignment = resolve_assignment(params)

    b = h / 2.0 if params.half_width_mode == DISJOINT_WIDTH else h
    amp = lam_tilde * h**params.beta / 2.0
    if params.half_width_mode == DISJOINT_WIDTH:
        s_beta = pattern_seminorm(params.beta)
        amp = min(amp, params.lam * b**params.beta / (2.0 * s_beta))
    assert amp <= 0.5, "bump amplitude exceeds 1/2, means would leave [0,1]"

    centers = (np.arange(1, M + 1) - 0.5) * h

    def mean_fn(ts: np.ndarray, arm: int) -> np.ndarray:
        ts = np.asarray(ts, dtype=np.int64)
        seg = (ts + seg_len - 1) // seg_len - 1  # 0-based segment index
        u = (ts / T0 - centers[seg]) / b
        val = amp * unit_shape(u)
        sign = np.where(assignment[seg] == arm, 1.0, -1.0)
        return 0.5 + sign * val

    if noise.kind == BERNOULLI and not 0.0 <= amp <= 0.5:
        raise GeneratorRejection("Bernoulli bump instance needs means in [0,1]")

    middle_min_gap = 2.0 * amp * middle_region_min(params.half_width_mode)
    meta = {
        "kind": "bump",
        "params": params,
        "T_requested": params.T,
        "seg_len": seg_len,
        "amp": amp,
        "half_width": b,
        "assignment": assignment,
        # numeric analogue of the lower-middle property: min gap over the
        # middle half of each segment is >= middle_constant * lam_tilde * h^beta
        "middle_constant": middle_min_gap / (lam_tilde * h**params.beta),
    }
    return EnvironmentModel(params.K, T0, mean_fn, noise, meta=meta)
