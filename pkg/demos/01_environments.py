"""Tour of the environment generators.

Builds one environment from each family (oscillating two-arm, piecewise
stationary, smooth bump instance), prints what the mean curves look like,
and round-trips one through the CSV format.
"""
from __future__ import annotations

import os
import tempfile

import numpy as np

from sigshift import (
    BumpParams,
    NoiseModel,
    PiecewiseSpec,
    TrigParams,
    holder_coefficient,
    load_csv,
    make_bump_instance,
    make_piecewise,
    make_trig,
    save_csv,
)


def describe(env, name):
    mu = env.means_matrix()
    gaps = env.gaps_matrix()
    print(f"\n{name}: K={env.K} T={env.T} noise={env.noise.kind}")
    cols = np.linspace(0, env.T - 1, 6, dtype=int)
    for a in range(env.K):
        row = "  ".join(f"{mu[a, t]:.3f}" for t in cols)
        print(f"  arm {a + 1} means @ t={[int(c) + 1 for c in cols]}: {row}")
    print(f"  max gap {gaps.max():.3f}, rounds with a nonzero gap: "
          f"{int((gaps.max(axis=0) > 0).sum())}/{env.T}")


def main():
    trig = make_trig(
        TrigParams(A=0.3, nu=2.5, phi=0.6, T=2000), NoiseModel.gaussian(0.001)
    )
    describe(trig, "oscillating two-arm")
    # lambda_1 of the gap curve: the scanner-facing smoothness coefficient
    lam1 = holder_coefficient(trig, a=2, n=1, grid_size=4000)
    print(f"  first-order coefficient of arm 2's gap curve: {lam1:.4f} "
          f"(closed form 2*pi*nu*A = {2 * np.pi * 2.5 * 0.3:.4f})")

    spec = PiecewiseSpec(
        segments=((600, (0.0, 0.4, 0.25)), (900, (0.3, 0.0, 0.5)), (500, (0.0, 0.2, 0.1))),
        baseline=0.9,
    )
    pw = make_piecewise(spec, NoiseModel.bernoulli())
    describe(pw, "piecewise stationary")
    for i, (length, seg_gaps) in enumerate(spec.segments):
        print(f"  segment {i}: {length} rounds, gaps {seg_gaps}")

    params = BumpParams(beta=1.0, lam=1.0, K=3, T=6000, seed=4)
    bump = make_bump_instance(params, NoiseModel.deterministic())
    describe(bump, "smooth bump instance")
    print(f"  derived: M={params.M} segments of width h={params.h:.5f}, "
          f"clipped drift budget lam_tilde={params.lam_tilde:.5f}")
    print(f"  realized horizon {bump.T} = M * (T // M) rounds")

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "trig.csv")
        save_csv(trig, path)
        back = load_csv(path)
        same = np.array_equal(back.means_matrix(), trig.means_matrix())
        print(f"\nCSV round trip: wrote {path.split('/')[-1]}, "
              f"means byte-stable: {same}")


if __name__ == "__main__":
    main()
