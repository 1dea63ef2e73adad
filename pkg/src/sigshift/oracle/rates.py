"""Closed-form rate quantities and the drift-budget safety classifier."""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..env.holder import holder_coefficient
from ..env.model import EnvironmentModel
from .shifts import ShiftProfile, phase_rate

CERTIFIED_SAFE = "CertifiedSafe"
NOT_CERTIFIED = "NotCertified"


@dataclass(frozen=True)
class RateParams:
    beta: float
    lam: float
    K: int
    T: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "K", int(self.K))
        object.__setattr__(self, "T", int(self.T))
        if self.beta <= 0 or self.lam <= 0:
            raise ValueError(f"beta and lam must be > 0, got beta={self.beta}, lam={self.lam}")
        if self.K < 2:
            raise ValueError(f"K must be an integer >= 2, got {self.K}")
        if self.T < 1:
            raise ValueError(f"T must be >= 1, got {self.T}")


def _smooth_term(p: RateParams) -> float:
    e = 2.0 * p.beta + 1.0
    return p.T ** ((p.beta + 1.0) / e) * p.lam ** (1.0 / e) * p.K ** (p.beta / e)


def minimax_rate(p: RateParams) -> float:
    """min( sqrt(KT) + T^((b+1)/(2b+1)) lam^(1/(2b+1)) K^(b/(2b+1)), T )."""
    return min(math.sqrt(p.K * p.T) + _smooth_term(p), float(p.T))


def upper_bound_ratio(profile: ShiftProfile, p: RateParams) -> float:
    """Phase-sum rate over the uncapped smooth bound, constant left free.

    Callers sweep this over an environment family and assert boundedness;
    the bound's unspecified leading constant is deliberately not baked in.
    """
    if profile.K != p.K:
        raise ValueError(f"profile has K={profile.K}, params K={p.K}")
    if profile.T != p.T:
        raise ValueError(f"profile has T={profile.T}, params T={p.T}")
    rhs = math.sqrt(p.beta + 1.0) * (math.sqrt(p.K * p.T) + _smooth_term(p))
    return phase_rate(profile, p.K) / rhs


def phase_transition_classify(
    env: EnvironmentModel,
    beta: float,
    K: int | None = None,
    T: int | None = None,
    grid_size: int = 10_000,
    tol: float = 0.05,
) -> str:
    """CertifiedSafe iff every lambda_n (n = 0..floor(beta)) clears sqrt(K/T).

    Above the threshold no numeric certificate exists (the phase transition
    is an existence statement about the class, not the instance), so the
    negative answer is NotCertified, never "unsafe". tol is multiplicative
    slack absorbing finite-difference stencil error.
    """
    if beta <= 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    K = env.K if K is None else int(K)
    T = env.T if T is None else int(T)
    lam_max = 0.0
    for a in range(1, env.K + 1):
        for n in range(int(math.floor(beta)) + 1):
            lam_max = max(lam_max, holder_coefficient(env, a, n, grid_size))
    if lam_max <= math.sqrt(K / T) * (1.0 + tol):
        return CERTIFIED_SAFE
    return NOT_CERTIFIED
