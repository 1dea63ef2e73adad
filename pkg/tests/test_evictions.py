"""Eviction-time oracle, gap-dependent rates, and safe-arm certification."""
import math

import numpy as np
import pytest

from sigshift import (
    EnvironmentModel,
    EvictionTrace,
    NoiseModel,
    PiecewiseSpec,
    eviction_times,
    gap_dependent_rate,
    restarting_oracle_rate,
    safe_arm_check,
)
from sigshift.oracle.shifts import dyadic_lengths
from tests.reference_impls import brute_force_eviction_times, resum_restarting_rate


def test_oracle_equals_brute_force_exact_mode(random_corpus):
    for env in random_corpus[:25]:
        for c2 in (0.5, 1.0):
            trace = eviction_times(env, c2=c2, mode="exact")
            times, changes = brute_force_eviction_times(env.gaps_matrix(), env.K, c2=c2)
            assert list(trace.times) == times, (env.meta, c2)
            assert list(trace.armsets) == changes, (env.meta, c2)


def test_oracle_equals_brute_force_dyadic_mode(random_corpus):
    for env in random_corpus[25:45]:
        lens = dyadic_lengths(env.T)
        trace = eviction_times(env, c2=1.0, mode="dyadic")
        times, changes = brute_force_eviction_times(env.gaps_matrix(), env.K, c2=1.0, lengths=lens)
        assert list(trace.times) == times, env.meta
        assert list(trace.armsets) == changes, env.meta


def test_zero_log_horizon_evicts_immediately():
    # T=1 makes lnT = 0, so any positive weighted gap crosses the threshold
    env = EnvironmentModel.from_means(np.array([[1.0], [0.5]]), NoiseModel.deterministic())
    trace = eviction_times(env, c2=1.0)
    assert trace.times == (1, 2)  # arm 2 out at round 1; arm 1 survives (sentinel T+1)
    assert trace.set_at(1) == (1,)


def test_never_evicts_with_equal_means():
    env = EnvironmentModel.from_means(np.full((3, 50), 0.4), NoiseModel.deterministic())
    trace = eviction_times(env, c2=1.0)
    assert trace.times == (51, 51, 51)
    assert trace.armsets == ((1, (1, 2, 3)),)


def test_trace_validation_and_round_trip():
    tr = EvictionTrace(times=(5, 12, 31), armsets=((1, (1, 2, 3)), (5, (1, 3)), (12, (1,))), c2=1.0)
    assert tr.K == 3
    assert tr.set_at(1) == (1, 2, 3)
    assert tr.set_at(4) == (1, 2, 3)
    assert tr.set_at(5) == (1, 3)
    assert tr.set_at(30) == (1,)
    assert EvictionTrace.from_dict(tr.to_dict()) == tr
    spans = tr.spans(30)
    assert spans[0] == (1, 5, (1, 2, 3))
    assert spans[-1] == (12, 31, (1,))
    with pytest.raises(ValueError):
        EvictionTrace(times=(5, 3), armsets=((1, (1, 2)),), c2=1.0)
    with pytest.raises(ValueError):
        EvictionTrace(times=(3,), armsets=((2, (1, 2)),), c2=1.0)  # must start at round 1
    with pytest.raises(ValueError):
        EvictionTrace(times=(3,), armsets=((1, (1, 2)), (3, (1, 2))), c2=1.0)  # no shrink
    with pytest.raises(ValueError):
        EvictionTrace(times=(3,), armsets=((1, (1, 2)),), c2=0.0)


def test_gap_dependent_rate_matches_loop(random_corpus):
    for env in random_corpus[:8]:
        trace = eviction_times(env, c2=1.0, mode="exact")
        gaps = env.gaps_matrix()
        total = 0.0
        for t in range(1, env.T + 1):
            arms = trace.set_at(t)
            if arms:
                total += sum(gaps[a - 1, t - 1] for a in arms) / len(arms)
        assert gap_dependent_rate(env, trace) == pytest.approx(total, rel=1e-12)


def test_restarting_oracle_rate_literal():
    spec = PiecewiseSpec(segments=((100, (0.0, 0.5)), (50, (0.25, 0.0))), baseline=0.9)
    rate = restarting_oracle_rate(spec)
    lnT = math.log(150)
    assert rate == pytest.approx(lnT / 0.5 + lnT / 0.25, rel=1e-15)
    assert rate == pytest.approx(resum_restarting_rate(spec.segments, 150), rel=1e-15)
    # zero gaps contribute nothing
    flat = PiecewiseSpec(segments=((100, (0.0, 0.0)),), baseline=0.5)
    assert restarting_oracle_rate(flat) == 0.0


def test_gap_rate_bounds_on_one_safe_env(safe_corpus):
    env, spec = safe_corpus[0]
    trace = eviction_times(env, c2=1.0, mode="exact")
    rate = gap_dependent_rate(env, trace)
    assert rate <= restarting_oracle_rate(spec)
    assert rate <= math.sqrt(env.K * env.T * math.log(env.T))


def test_persistent_best_arm_is_never_evicted(safe_corpus):
    for env, _spec in safe_corpus[:5]:
        trace = eviction_times(env, c2=1.0, mode="exact")
        assert trace.times[-1] == env.T + 1  # at least one survivor
        for _f, _to, arms in trace.spans(env.T):
            assert 1 in arms  # the zero-gap arm stays


def test_safe_arm_check_certifies_zero_gap_arm(safe_corpus):
    env, _spec = safe_corpus[1]
    report = safe_arm_check(env, mode="dyadic")
    assert 1 in report.safe_arms
    assert report.per_arm[0] == 0.0


def test_safe_arm_check_flags_flip_env(random_corpus):
    env = next(e for e in random_corpus if e.meta.get("tag") == "one-flip")
    report = safe_arm_check(env, mode="exact")
    assert report.safe_arms == ()
    assert report.worst_violation > 1.0


def test_safe_arm_check_accepts_trajectory_forms(random_corpus):
    env = next(e for e in random_corpus if e.meta.get("tag") == "constant")
    tr = eviction_times(env, c2=1.0, mode="exact")
    r1 = safe_arm_check(env, mode="exact")
    r2 = safe_arm_check(env, armset_traj=tr, mode="exact")
    r3 = safe_arm_check(env, armset_traj=[(1, tuple(range(1, env.K + 1)))], mode="exact")
    assert r1 == r3
    assert set(r2.safe_arms) <= set(r1.safe_arms) | {a + 1 for a in range(env.K)}


def test_safe_arm_check_rejects_empty_set_round():
    env = EnvironmentModel.from_means(np.full((2, 10), 0.5), NoiseModel.deterministic())
    with pytest.raises(ValueError):
        safe_arm_check(env, armset_traj=[(1, (1, 2)), (5, ())])


def test_eviction_parameter_validation(random_corpus):
    env = random_corpus[0]
    with pytest.raises(ValueError):
        eviction_times(env, c2=0.0)
    with pytest.raises(ValueError):
        eviction_times(env, mode="fast")


def test_both_arms_can_fall_same_round():
    # two equally terrible arms against a stable best arm drop together
    means = np.vstack([np.full(60, 1.0), np.full(60, 0.2), np.full(60, 0.2)])
    env = EnvironmentModel.from_means(means, NoiseModel.deterministic())
    trace = eviction_times(env, c2=0.5, mode="exact")
    t2, t3 = trace.times[0], trace.times[1]
    assert t2 == t3 <= 60
    assert trace.armsets[-1][1] == (1,)
