"""Config file loading and environment-spec parsing shared by the CLI and
harness. Files are TOML or JSON by extension; environment blocks follow
`{kind, params..., noise: {kind, ...}}`."""
from __future__ import annotations

import json
import os
from importlib import resources

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .env.generators import BumpParams, PiecewiseSpec, TrigParams, make_bump_instance, make_piecewise, make_trig
from .env.io import load_csv
from .env.model import EnvironmentModel, NoiseModel
from .errors import ConfigError

_NOISE_KEYS = {"kind", "variance", "clip"}


def load_config_file(path: str) -> dict:
    """Parse a TOML (.toml) or JSON (.json) config file into a dict."""
    ext = os.path.splitext(path)[1].lower()
    try:
        if ext == ".toml":
            with open(path, "rb") as fh:
                return tomllib.load(fh)
        if ext == ".json":
            with open(path) as fh:
                return json.load(fh)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    raise ConfigError(f"{path}: unsupported config extension {ext!r} (use .toml or .json)")


def preset_names() -> list[str]:
    root = resources.files("sigshift").joinpath("presets")
    return sorted(p.name[: -len(".toml")] for p in root.iterdir() if p.name.endswith(".toml"))


def resolve_config(path_or_preset: str) -> dict:
    """Load a config from a file path, or from a packaged preset by name."""
    if os.path.exists(path_or_preset):
        return load_config_file(path_or_preset)
    root = resources.files("sigshift").joinpath("presets")
    candidate = root.joinpath(path_or_preset + ".toml")
    if candidate.is_file():
        return tomllib.loads(candidate.read_text())
    raise ConfigError(
        f"{path_or_preset!r} is neither a file nor a preset; presets: {', '.join(preset_names())}"
    )


def parse_noise(block: dict | None) -> NoiseModel:
    if block is None:
        return NoiseModel.deterministic()
    extra = set(block) - _NOISE_KEYS
    if extra:
        raise ConfigError(f"noise block has unknown keys {sorted(extra)}")
    kind = block.get("kind")
    if kind not in ("bernoulli", "gaussian", "deterministic"):
        raise ConfigError(f"noise kind must be bernoulli/gaussian/deterministic, got {kind!r}")
    try:
        if kind == "gaussian":
            return NoiseModel.gaussian(float(block.get("variance", 0.0)), clip=bool(block.get("clip", False)))
        return NoiseModel(kind)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _require(spec: dict, keys: tuple[str, ...], kind: str) -> None:
    missing = [k for k in keys if k not in spec]
    if missing:
        raise ConfigError(f"{kind} environment spec missing keys {missing}")


def build_environment(spec: dict, default_T: int | None = None) -> EnvironmentModel:
    """Construct an environment from a config block.

    Kinds: trig (A, nu, phi, T), bump (beta, lambda, K, T, assignment?,
    seed?, half_width_mode?), piecewise (baseline?, segments=[{length,
    gaps}]), csv (path). A missing per-env T falls back to `default_T`
    (the run config's top-level horizon).
    """
    if not isinstance(spec, dict):
        raise ConfigError(f"environment spec must be a table/object, got {type(spec).__name__}")
    spec = dict(spec)
    kind = spec.pop("kind", None)
    noise = parse_noise(spec.pop("noise", None))
    if "T" not in spec and default_T is not None and kind in ("trig", "bump"):
        spec["T"] = default_T

    if kind == "trig":
        _require(spec, ("A", "nu", "phi", "T"), "trig")
        extra = set(spec) - {"A", "nu", "phi", "T"}
        if extra:
            raise ConfigError(f"trig spec has unknown keys {sorted(extra)}")
        return make_trig(TrigParams(A=spec["A"], nu=spec["nu"], phi=spec["phi"], T=spec["T"]), noise)

    if kind == "bump":
        lam = spec.pop("lambda", spec.pop("lam", None))
        if lam is None:
            raise ConfigError("bump spec missing 'lambda'")
        _require(spec, ("beta", "K", "T"), "bump")
        extra = set(spec) - {"beta", "K", "T", "assignment", "seed", "half_width_mode"}
        if extra:
            raise ConfigError(f"bump spec has unknown keys {sorted(extra)}")
        assignment = spec.get("assignment", "uniform")
        if isinstance(assignment, list):
            assignment = tuple(assignment)
        params = BumpParams(
            beta=spec["beta"],
            lam=lam,
            K=spec["K"],
            T=spec["T"],
            assignment=assignment,
            seed=spec.get("seed", 0),
            half_width_mode=spec.get("half_width_mode", "disjoint"),
        )
        return make_bump_instance(params, noise)

    if kind == "piecewise":
        _require(spec, ("segments",), "piecewise")
        extra = set(spec) - {"segments", "baseline"}
        if extra:
            raise ConfigError(f"piecewise spec has unknown keys {sorted(extra)}")
        segs = []
        for i, seg in enumerate(spec["segments"]):
            if not isinstance(seg, dict) or "length" not in seg or "gaps" not in seg:
                raise ConfigError(f"segment {i + 1} must be a table with 'length' and 'gaps'")
            segs.append((seg["length"], tuple(seg["gaps"])))
        return make_piecewise(PiecewiseSpec(segments=tuple(segs), baseline=spec.get("baseline", 1.0)), noise)

    if kind == "csv":
        _require(spec, ("path",), "csv")
        extra = set(spec) - {"path"}
        if extra:
            raise ConfigError(f"csv spec has unknown keys {sorted(extra)}")
        return load_csv(spec["path"], noise)

    raise ConfigError(f"unknown environment kind {kind!r}; expected trig/bump/piecewise/csv")
