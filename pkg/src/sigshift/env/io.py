"""CSV serialization of environments: header `t,arm,mean`, one row per
(t, arm), full-precision decimal floats, LF line endings."""
from __future__ import annotations

import csv

import numpy as np

from ..errors import ConfigError
from .model import EnvironmentModel, NoiseModel


def save_csv(env: EnvironmentModel, path: str) -> None:
    """Write the dense mean matrix, rounds outer, arms inner."""
    means = env.means_matrix()
    with open(path, "w", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "arm", "mean"])
        for t in range(1, env.T + 1):
            for a in range(1, env.K + 1):
                w.writerow([t, a, repr(float(means[a - 1, t - 1]))])


def load_csv(path: str, noise: NoiseModel | None = None) -> EnvironmentModel:
    """Load a dense environment; noise defaults to deterministic.

    Requires every (t, arm) cell exactly once, rounds contiguous from 1,
    arms contiguous from 1, and finite means. Violations raise ConfigError
    naming the offending row.
    """
    cells: dict[tuple[int, int], float] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["t", "arm", "mean"]:
            raise ConfigError(f"{path}: expected header 't,arm,mean', got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ConfigError(f"{path}: row {lineno}: expected 3 fields, got {len(row)}")
            try:
                t, a, mu = int(row[0]), int(row[1]), float(row[2])
            except ValueError as exc:
                raise ConfigError(f"{path}: row {lineno}: {exc}") from None
            if not np.isfinite(mu):
                raise ConfigError(f"{path}: row {lineno}: non-finite mean {row[2]}")
            if (t, a) in cells:
                raise ConfigError(f"{path}: row {lineno}: duplicate cell (t={t}, arm={a})")
            cells[(t, a)] = mu
    if not cells:
        raise ConfigError(f"{path}: no data rows")
    T = max(t for t, _ in cells)
    K = max(a for _, a in cells)
    if min(t for t, _ in cells) != 1:
        raise ConfigError(f"{path}: rounds must start at 1")
    if min(a for _, a in cells) != 1:
        raise ConfigError(f"{path}: arms must start at 1")
    means = np.empty((K, T), dtype=np.float64)
    for t in range(1, T + 1):
        for a in range(1, K + 1):
            if (t, a) not in cells:
                raise ConfigError(f"{path}: missing cell (t={t}, arm={a})")
            means[a - 1, t - 1] = cells[(t, a)]
    return EnvironmentModel.from_means(
        means, noise or NoiseModel.deterministic(), meta={"kind": "csv", "path": str(path)}
    )
