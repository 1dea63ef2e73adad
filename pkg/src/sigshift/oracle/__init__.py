"""Ground-truth oracles: significant shifts, eviction times, rate formulas."""
from .evictions import (
    EvictionTrace,
    SafeArmReport,
    eviction_times,
    gap_dependent_rate,
    restarting_oracle_rate,
    safe_arm_check,
)
from .rates import (
    CERTIFIED_SAFE,
    NOT_CERTIFIED,
    RateParams,
    minimax_rate,
    phase_transition_classify,
    upper_bound_ratio,
)
from .shifts import (
    DYADIC,
    EXACT,
    ShiftProfile,
    dyadic_lengths,
    has_significant_regret,
    phase_rate,
    significant_shifts,
)

__all__ = [
    "CERTIFIED_SAFE",
    "DYADIC",
    "EXACT",
    "NOT_CERTIFIED",
    "EvictionTrace",
    "RateParams",
    "SafeArmReport",
    "ShiftProfile",
    "dyadic_lengths",
    "eviction_times",
    "gap_dependent_rate",
    "has_significant_regret",
    "minimax_rate",
    "phase_rate",
    "phase_transition_classify",
    "restarting_oracle_rate",
    "safe_arm_check",
    "significant_shifts",
    "upper_bound_ratio",
]
