"""Bump shape, derivatives, and the hard-instance generator."""
import math

import numpy as np
import pytest

from sigshift import BumpParams, GeneratorRejection, NoiseModel, make_bump_instance
from sigshift.env.bumps import (
    bump,
    middle_region_min,
    pattern_seminorm,
    unit_shape,
    unit_shape_derivative,
)
from sigshift.env.generators import resolve_assignment


def test_bump_shape_values():
    assert bump(0.0) == pytest.approx(math.exp(-1.0), abs=0)
    assert unit_shape(0.0) == pytest.approx(1.0, abs=0)
    assert unit_shape(0.5) == pytest.approx(math.exp(1.0 - 1.0 / 0.75), rel=1e-15)
    assert bump(1.0) == 0.0 and bump(-1.0) == 0.0 and bump(3.7) == 0.0


def test_bump_symmetry_and_monotone_decay():
    u = np.linspace(0.0, 0.999, 500)
    s = unit_shape(u)
    np.testing.assert_allclose(unit_shape(-u), s, rtol=0, atol=0)
    assert np.all(np.diff(s) <= 0)


def test_unit_shape_derivative_order_zero_is_shape():
    u = np.linspace(-1.2, 1.2, 301)
    np.testing.assert_allclose(unit_shape_derivative(u, 0), unit_shape(u), rtol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_unit_shape_derivative_matches_finite_differences(n):
    # each recursion step checked against a central difference of the exact
    # previous order; higher-order stencils on S itself lose too many digits
    u = np.linspace(-0.9, 0.9, 181)
    h = 1e-6
    fd = (unit_shape_derivative(u + h, n - 1) - unit_shape_derivative(u - h, n - 1)) / (2 * h)
    exact = unit_shape_derivative(u, n)
    scale = np.abs(exact).max()
    np.testing.assert_allclose(exact, fd, rtol=1e-4, atol=1e-6 * scale)


def test_derivatives_vanish_at_support_boundary():
    u = np.array([-1.0, 1.0, 0.999999, -0.999999])
    for n in range(5):
        vals = unit_shape_derivative(u, n)
        assert np.all(np.isfinite(vals))
        np.testing.assert_allclose(vals, 0.0, atol=1e-9)


def test_pattern_seminorm_positive_and_covers_lone_bump():
    s1 = pattern_seminorm(1.0)
    assert s1 > 0
    # lone-bump first derivative max is a lower bound for the pattern worst case
    u = np.linspace(-1, 1, 4001)
    assert s1 >= np.abs(unit_shape_derivative(u, 1)).max() - 1e-9


def test_middle_region_min_values():
    assert middle_region_min("disjoint") == pytest.approx(math.exp(1.0 - 1.0 / 0.75), rel=1e-12)
    assert middle_region_min("paper") == pytest.approx(math.exp(1.0 - 1.0 / (1.0 - 0.0625)), rel=1e-12)


def test_segment_count_analytic_case():
    # lam_tilde stays at lam=1, so M = ceil((T/K)^(1/3)) = ceil(79.37) = 80
    p = BumpParams(beta=1.0, lam=1.0, K=2, T=10**6)
    assert p.lam_tilde == 1.0
    assert p.M == 80
    assert p.h == 1.0 / 80


def test_lam_tilde_cap_exact_case():
    # 2^-3 * (1024/2)^1 = 64 < lam, and M = (512)^(1/3) * 64^(2/3) = 8 * 16 = 128
    p = BumpParams(beta=1.0, lam=100.0, K=2, T=1024)
    assert p.lam_tilde == 64.0
    assert p.M == 128


def test_bump_params_guards():
    with pytest.raises(GeneratorRejection):
        BumpParams(beta=1.0, lam=1.0, K=50, T=100)  # K > T/4
    with pytest.raises(GeneratorRejection):
        BumpParams(beta=1.0, lam=0.001, K=2, T=1000)  # lam below sqrt(K/T)
    with pytest.raises(GeneratorRejection):
        BumpParams(beta=0.0, lam=1.0, K=2, T=1000)
    with pytest.raises(GeneratorRejection):
        BumpParams(beta=1.0, lam=1.0, K=2, T=1000, half_width_mode="wide")
    with pytest.raises(GeneratorRejection):
        BumpParams(beta=1.0, lam=1.0, K=2, T=1000, assignment="zigzag")


def test_assignment_modes():
    p = BumpParams(beta=1.0, lam=1.0, K=3, T=3000, assignment="round_robin")
    arms = resolve_assignment(p)
    assert len(arms) == p.M
    np.testing.assert_array_equal(arms[:6], [1, 2, 3, 1, 2, 3])

    explicit = tuple(((i % 3) + 1) for i in range(p.M))
    p2 = BumpParams(beta=1.0, lam=1.0, K=3, T=3000, assignment=explicit)
    np.testing.assert_array_equal(resolve_assignment(p2), explicit)

    u1 = resolve_assignment(BumpParams(beta=1.0, lam=1.0, K=3, T=3000, seed=1))
    u1_again = resolve_assignment(BumpParams(beta=1.0, lam=1.0, K=3, T=3000, seed=1))
    u2 = resolve_assignment(BumpParams(beta=1.0, lam=1.0, K=3, T=3000, seed=2))
    np.testing.assert_array_equal(u1, u1_again)
    assert not np.array_equal(u1, u2)
    assert u1.min() >= 1 and u1.max() <= 3

    with pytest.raises(GeneratorRejection):
        BumpParams(beta=1.0, lam=1.0, K=3, T=3000, assignment=(1, 2))  # wrong length
    with pytest.raises(GeneratorRejection):
        BumpParams(beta=1.0, lam=1.0, K=3, T=3000, assignment=tuple([9] * p.M))


def test_bump_instance_structure():
    p = BumpParams(beta=1.0, lam=0.5, K=3, T=5000, assignment="round_robin")
    env = make_bump_instance(p, NoiseModel.deterministic())
    assert env.K == 3
    assert env.T == p.M * (5000 // p.M)
    assert env.T >= 2500
    means = env.means_matrix()
    assert means.min() >= 0.0 and means.max() <= 1.0
    amp = env.meta["amp"]
    assert 0 < amp <= 0.5
    # the best arm in each segment is the assigned one at the segment center
    seg_len = env.meta["seg_len"]
    arms = resolve_assignment(p)
    mid = np.arange(p.M) * seg_len + seg_len // 2  # 0-based round at segment centers
    best = means[:, mid].argmax(axis=0) + 1
    np.testing.assert_array_equal(best, arms)
    # center gap is near 2 * amp and certainly above the middle-region floor
    gaps = env.gaps_matrix()
    worst = gaps[:, mid].max(axis=0)
    assert np.all(worst <= 2 * amp + 1e-15)
    assert np.all(worst >= 2 * amp * math.exp(1.0 - 1.0 / 0.75))


def test_bump_instance_paper_mode_differs():
    p1 = BumpParams(beta=1.0, lam=0.5, K=2, T=4000, half_width_mode="disjoint")
    p2 = BumpParams(beta=1.0, lam=0.5, K=2, T=4000, half_width_mode="paper")
    e1 = make_bump_instance(p1, NoiseModel.deterministic())
    e2 = make_bump_instance(p2, NoiseModel.deterministic())
    assert not np.array_equal(e1.means_matrix(), e2.means_matrix())


def test_bump_means_bernoulli_compatible():
    p = BumpParams(beta=0.5, lam=2.0, K=2, T=2000)
    env = make_bump_instance(p, NoiseModel.bernoulli())
    m = env.means_matrix()
    assert m.min() >= 0.0 and m.max() <= 1.0
