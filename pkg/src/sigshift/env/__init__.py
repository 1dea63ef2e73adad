"""Bandit environments: models, generators, Hölder verification, CSV I/O."""
from .bumps import bump, middle_region_min, pattern_seminorm, unit_shape, unit_shape_derivative
from .generators import (
    DISJOINT_WIDTH,
    PAPER_WIDTH,
    BumpParams,
    PiecewiseSpec,
    TrigParams,
    make_bump_instance,
    make_piecewise,
    make_trig,
    resolve_assignment,
)
from .holder import HolderReport, holder_coefficient, verify_holder
from .io import load_csv, save_csv
from .model import (
    BERNOULLI,
    DETERMINISTIC,
    GAUSSIAN,
    EnvironmentModel,
    NoiseModel,
    gap_at,
    sample_reward,
)

__all__ = [
    "BERNOULLI",
    "DETERMINISTIC",
    "DISJOINT_WIDTH",
    "GAUSSIAN",
    "PAPER_WIDTH",
    "BumpParams",
    "EnvironmentModel",
    "HolderReport",
    "NoiseModel",
    "PiecewiseSpec",
    "TrigParams",
    "bump",
    "gap_at",
    "holder_coefficient",
    "load_csv",
    "make_bump_instance",
    "make_piecewise",
    "make_trig",
    "middle_region_min",
    "pattern_seminorm",
    "resolve_assignment",
    "sample_reward",
    "save_csv",
    "unit_shape",
    "unit_shape_derivative",
    "verify_holder",
]
