"""Playable policies side by side on one drifting environment.

The adaptive meta-policy (episodes + randomized replays) needs no knowledge
of the drift; the plain elimination baseline evicts the early loser and
then goes stale when the best arm flips; the oracle-restart policy cheats
by reading the true shift rounds and re-eliminating per phase; uniform
random anchors the top of the regret scale.
"""
from __future__ import annotations

from sigshift import (
    NoiseModel,
    TrigParams,
    dynamic_regret,
    make_trig,
    run_policy,
    significant_shifts,
)


def main():
    env = make_trig(TrigParams(A=0.45, nu=1.0, phi=0.2, T=9000), NoiseModel.gaussian(0.001))
    prof = significant_shifts(env, mode="dyadic")
    print(f"env: K={env.K} T={env.T}, true shifts {prof.shifts[1:]} (count {prof.count})")

    rows = []
    for name, options in (
        ("meta", {"c2": 0.4}),
        ("se", {"c5": 1.05}),
        ("oracle-restart", {"c5": 1.05, "mode": "dyadic"}),
        ("rand", {}),
    ):
        trace = run_policy(name, env, seed=314, **options)
        final = float(dynamic_regret(trace, env)[-1])
        kinds = {}
        for e in trace.events:
            kinds[e["type"]] = kinds.get(e["type"], 0) + 1
        rows.append((name, final, kinds))

    print(f"{'policy':<16} {'final regret':>12}   events")
    for name, final, kinds in rows:
        ev = ", ".join(f"{k}={v}" for k, v in sorted(kinds.items())) or "-"
        print(f"{name:<16} {final:>12.1f}   {ev}")

    meta_restarts = [e["round"] for e in
                     run_policy("meta", env, seed=314, c2=0.4).events
                     if e["type"] == "episode_restart"]
    print(f"\nmeta restarts at rounds {meta_restarts}")
    print(f"certified shifts at     {list(prof.shifts[1:])}")
    print("both react to the same best-arm flip; the policy restarts once its "
          "own threshold is crossed, the scanner certifies at the stricter "
          "sqrt(K * len) bar, so the restart can land a little earlier")


if __name__ == "__main__":
    main()
