"""sigshift: simulation and analysis toolkit for smoothly drifting bandits.

Subpackages and modules:

- ``env``      environment models, generators, smoothness checks, CSV I/O
- ``oracle``   significant-shift scanner, eviction-time oracle, rate formulas
- ``policies`` playable policies (adaptive meta-policy, elimination baselines)
- ``harness``  replicated experiment driver and aggregation
- ``config``   TOML/JSON config loading and packaged presets
- ``cli``      ``sigshift`` command-line entry point
"""

from .env import (
    EnvironmentModel,
    NoiseModel,
    BumpParams,
    PiecewiseSpec,
    TrigParams,
    HolderReport,
    holder_coefficient,
    load_csv,
    make_bump_instance,
    make_piecewise,
    make_trig,
    sample_reward,
    save_csv,
    verify_holder,
)
from .errors import ConfigError, GeneratorRejection
from .harness import (
    RegretAggregate,
    RunConfig,
    dynamic_regret,
    export_csv,
    export_json,
    parse_run_config,
    reference_curves,
    run_many,
)
from .oracle import (
    EvictionTrace,
    RateParams,
    SafeArmReport,
    ShiftProfile,
    eviction_times,
    gap_dependent_rate,
    minimax_rate,
    phase_rate,
    phase_transition_classify,
    restarting_oracle_rate,
    safe_arm_check,
    significant_shifts,
    upper_bound_ratio,
)
from .policies import (
    MetaConfig,
    PolicyTrace,
    estimate_iw,
    load_trace,
    run_meta,
    run_oracle_restart,
    run_policy,
    run_random,
    run_se_safe,
    save_trace,
)
from .rng import keyed_u01, make_rng, mix64

__version__ = "0.1.0"

__all__ = [
    "BumpParams",
    "ConfigError",
    "EnvironmentModel",
    "EvictionTrace",
    "GeneratorRejection",
    "HolderReport",
    "MetaConfig",
    "NoiseModel",
    "PiecewiseSpec",
    "PolicyTrace",
    "RateParams",
    "RegretAggregate",
    "RunConfig",
    "SafeArmReport",
    "ShiftProfile",
    "TrigParams",
    "dynamic_regret",
    "estimate_iw",
    "eviction_times",
    "export_csv",
    "export_json",
    "gap_dependent_rate",
    "holder_coefficient",
    "keyed_u01",
    "load_csv",
    "load_trace",
    "make_bump_instance",
    "make_piecewise",
    "make_rng",
    "make_trig",
    "minimax_rate",
    "mix64",
    "parse_run_config",
    "phase_rate",
    "phase_transition_classify",
    "reference_curves",
    "restarting_oracle_rate",
    "run_many",
    "run_meta",
    "run_oracle_restart",
    "run_policy",
    "run_random",
    "run_se_safe",
    "safe_arm_check",
    "sample_reward",
    "save_trace",
    "save_csv",
    "significant_shifts",
    "upper_bound_ratio",
    "verify_holder",
]
