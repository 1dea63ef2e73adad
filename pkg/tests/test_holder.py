"""Finite-difference smoothness measurement and certification."""
import math

import numpy as np
import pytest

from sigshift import (
    BumpParams,
    NoiseModel,
    holder_coefficient,
    make_bump_instance,
    verify_holder,
)
from tests.reference_impls import trig_gap_seminorm


def test_first_order_coefficient_matches_analytic_slope(tiny_trig):
    # gap curves of the sine benchmark have slope at most 2 pi nu A in x = t/T
    expected = trig_gap_seminorm(0.3, 3.0)
    measured = max(holder_coefficient(tiny_trig, a, 1, grid_size=4000) for a in (1, 2))
    assert measured == pytest.approx(expected, rel=0.02)


def test_zero_order_coefficient_is_max_abs_gap(tiny_trig):
    g = tiny_trig.gaps_matrix()
    c = holder_coefficient(tiny_trig, 2, 0, grid_size=tiny_trig.T)
    assert c == pytest.approx(g[1].max(), rel=1e-12)


def test_coefficient_validation(tiny_trig):
    with pytest.raises(ValueError):
        holder_coefficient(tiny_trig, 1, -1)
    with pytest.raises(ValueError):
        holder_coefficient(tiny_trig, 1, 5, grid_size=4)
    with pytest.raises(IndexError):
        holder_coefficient(tiny_trig, 9, 1)


def test_constant_env_has_zero_first_order_coefficient(random_corpus):
    env = next(e for e in random_corpus if e.meta.get("tag") == "constant")
    assert holder_coefficient(env, 1, 1, grid_size=120) == 0.0
    assert holder_coefficient(env, 2, 1, grid_size=120) == 0.0


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
def test_bump_instances_certify_within_declared_class(beta):
    p = BumpParams(beta=beta, lam=1.0, K=2, T=20_000)
    env = make_bump_instance(p, NoiseModel.deterministic())
    report = verify_holder(env, beta=beta, lam=1.0, tol=1.0, grid_size=10_000, seed=0)
    assert report.passed, f"worst ratio {report.worst_ratio} at {report.witness}"


def test_step_counterexample_fails(step_env):
    report = verify_holder(step_env, beta=1.0, lam=1.0, tol=1.0, grid_size=1000)
    assert not report.passed
    assert report.worst_ratio > 2.0
    x, x2, arm = report.witness
    assert 0.0 <= min(x, x2) and max(x, x2) <= 1.0 and arm in (1, 2)


def test_report_is_deterministic(tiny_trig):
    r1 = verify_holder(tiny_trig, beta=1.0, lam=7.0, seed=3, grid_size=2000)
    r2 = verify_holder(tiny_trig, beta=1.0, lam=7.0, seed=3, grid_size=2000)
    assert r1 == r2


def test_slack_monotone(tiny_trig):
    # gap-derivative oscillation is ~2 * 5.65; against lam=6 the ratio sits in
    # (1, 2): strict check fails, factor-2 slack passes
    strict = verify_holder(tiny_trig, beta=1.0, lam=6.0, tol=0.0, grid_size=4000)
    slack = verify_holder(tiny_trig, beta=1.0, lam=6.0, tol=1.0, grid_size=4000)
    assert not strict.passed
    assert slack.passed
    assert strict.worst_ratio == slack.worst_ratio


def test_worst_ratio_witness_consistency(step_env):
    report = verify_holder(step_env, beta=0.5, lam=1.0, grid_size=1000)
    assert report.worst_ratio > 1.0
    assert report.witness is not None
