"""Config loading: file formats, packaged presets, environment-spec parsing."""
from __future__ import annotations

import json

import numpy as np
import pytest

from sigshift import ConfigError, NoiseModel, parse_run_config, save_csv
from sigshift.config import (
    build_environment,
    load_config_file,
    parse_noise,
    preset_names,
    resolve_config,
)


# ----------------------------------------------------------- file loading

def test_load_config_file_toml_and_json_agree(tmp_path):
    t = tmp_path / "c.toml"
    t.write_text('T = 100\n[env]\nkind = "trig"\nA = 0.5\n')
    j = tmp_path / "c.json"
    j.write_text(json.dumps({"T": 100, "env": {"kind": "trig", "A": 0.5}}))
    assert load_config_file(str(t)) == load_config_file(str(j))


def test_load_config_file_rejects_other_extensions(tmp_path):
    p = tmp_path / "c.yaml"
    p.write_text("T: 100\n")
    with pytest.raises(ConfigError, match="extension"):
        load_config_file(str(p))


def test_load_config_file_wraps_parse_errors(tmp_path):
    p = tmp_path / "broken.toml"
    p.write_text("T = = 100\n")
    with pytest.raises(ConfigError, match="broken.toml"):
        load_config_file(str(p))
    q = tmp_path / "broken.json"
    q.write_text("{")
    with pytest.raises(ConfigError, match="broken.json"):
        load_config_file(str(q))


# ---------------------------------------------------------------- presets

def test_preset_names_lists_packaged_presets():
    names = preset_names()
    assert "paper_trig" in names and "paper_trig_full" in names


def test_resolve_config_prefers_existing_file(tmp_path):
    p = tmp_path / "paper_trig.toml"  # same stem as the preset
    p.write_text("T = 7\n")
    assert resolve_config(str(p)) == {"T": 7}


def test_resolve_config_unknown_name_lists_presets():
    with pytest.raises(ConfigError, match="paper_trig"):
        resolve_config("no_such_preset")


def test_paper_trig_preset_contents():
    raw = resolve_config("paper_trig")
    cfg = parse_run_config(raw)
    assert cfg.T == 100_000 and cfg.R == 20
    assert cfg.policy_name == "meta"
    env = build_environment(cfg.env_spec, cfg.T)
    assert env.K == 2 and env.T == 100_000
    assert env.noise == NoiseModel.gaussian(0.001)
    # the full-scale variant stretches the horizon 100x; the quick preset
    # compensates with a 10x amplitude (sqrt of the compression) and a /4
    # frequency so both realize the same number of significant shifts
    full = parse_run_config(resolve_config("paper_trig_full"))
    assert full.T == 10_000_000
    assert cfg.env_spec["A"] == 10.0 * full.env_spec["A"]
    assert cfg.env_spec["nu"] == full.env_spec["nu"] / 4.0
    assert cfg.env_spec["phi"] == full.env_spec["phi"]


# ------------------------------------------------------------------ noise

def test_parse_noise_default_is_deterministic():
    assert parse_noise(None) == NoiseModel.deterministic()


def test_parse_noise_variants():
    assert parse_noise({"kind": "bernoulli"}) == NoiseModel.bernoulli()
    got = parse_noise({"kind": "gaussian", "variance": 0.25, "clip": True})
    assert got == NoiseModel.gaussian(0.25, clip=True)


def test_parse_noise_rejections():
    with pytest.raises(ConfigError, match="unknown keys"):
        parse_noise({"kind": "gaussian", "sigma": 0.5})
    with pytest.raises(ConfigError, match="kind"):
        parse_noise({"kind": "poisson"})
    with pytest.raises(ConfigError, match="variance"):
        parse_noise({"kind": "gaussian", "variance": -1.0})


# ----------------------------------------------------------- environments

def test_build_trig_env_and_default_horizon():
    spec = {"kind": "trig", "A": 0.3, "nu": 2.0, "phi": 0.1}
    env = build_environment(spec, default_T=250)
    assert env.T == 250 and env.K == 2
    explicit = build_environment({**spec, "T": 100})
    assert explicit.T == 100  # per-env T wins over the default


def test_build_trig_rejects_unknown_and_missing_keys():
    with pytest.raises(ConfigError, match="missing"):
        build_environment({"kind": "trig", "A": 0.3, "nu": 2.0, "phi": 0.1})
    with pytest.raises(ConfigError, match="unknown keys"):
        build_environment(
            {"kind": "trig", "A": 0.3, "nu": 2.0, "phi": 0.1, "T": 10, "omega": 1}
        )


def test_build_bump_env_accepts_lambda_or_lam():
    a = build_environment({"kind": "bump", "beta": 1.0, "lambda": 1.0, "K": 2, "T": 200})
    b = build_environment({"kind": "bump", "beta": 1.0, "lam": 1.0, "K": 2, "T": 200})
    np.testing.assert_array_equal(a.means_matrix(), b.means_matrix())
    with pytest.raises(ConfigError, match="lambda"):
        build_environment({"kind": "bump", "beta": 1.0, "K": 2, "T": 200})


def test_build_bump_env_assignment_list_becomes_tuple():
    env = build_environment(
        {
            "kind": "bump",
            "beta": 1.0,
            "lambda": 1.0,
            "K": 2,
            "T": 200,
            "assignment": [1, 2, 1, 2, 1],  # this instance places 5 bumps
        }
    )
    assert env.K == 2


def test_build_piecewise_env():
    spec = {
        "kind": "piecewise",
        "baseline": 1.0,
        "segments": [
            {"length": 30, "gaps": [0.0, 0.5]},
            {"length": 20, "gaps": [0.25, 0.0]},
        ],
    }
    env = build_environment(spec)
    assert env.T == 50 and env.K == 2
    gaps = env.gaps_matrix()
    assert gaps[1, 0] == 0.5 and gaps[0, -1] == 0.25
    with pytest.raises(ConfigError, match="segment 1"):
        build_environment({"kind": "piecewise", "segments": [{"length": 5}]})


def test_build_csv_env_round_trip(tmp_path):
    from sigshift import EnvironmentModel

    means = np.asarray([[0.1, 0.9, 0.5], [0.5, 0.2, 0.7]])
    env0 = EnvironmentModel.from_means(means, NoiseModel.deterministic())
    path = str(tmp_path / "m.csv")
    save_csv(env0, path)
    env = build_environment(
        {"kind": "csv", "path": path, "noise": {"kind": "bernoulli"}}
    )
    np.testing.assert_array_equal(env.means_matrix(), means)
    assert env.noise == NoiseModel.bernoulli()


def test_build_environment_rejects_unknown_kind():
    with pytest.raises(ConfigError, match="unknown environment kind"):
        build_environment({"kind": "markov"})
    with pytest.raises(ConfigError, match="table"):
        build_environment(["kind", "trig"])


def test_noise_block_travels_with_env_spec():
    env = build_environment(
        {
            "kind": "trig",
            "A": 0.2,
            "nu": 1.0,
            "phi": 0.0,
            "T": 50,
            "noise": {"kind": "gaussian", "variance": 0.01},
        }
    )
    assert env.noise == NoiseModel.gaussian(0.01)
