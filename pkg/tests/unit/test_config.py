#!/usr/bin/env python3
"""
Tests for tolerance settings and run configuration loading.
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

import numpy as np
import pytest

from config.settings import get_execution_config, get_tolerances
from gabortorus.errors import ConfigError, InvalidLatticeError
from gabortorus.export import write_signal_csv
from gabortorus.phase_space import ModelOrder, Signal
from gabortorus.run_config import load_run_config, parse_run_config

CONFIG_DIR = Path(__file__).parent.parent.parent / "data" / "configs"


@pytest.fixture
def clean_env(monkeypatch):
    for name in (
        "GABORTORUS_FRAME_RATIO",
        "GABORTORUS_FINITE_TOL",
        "GABORTORUS_CONTINUUM_TOL",
        "GABORTORUS_TAIL_TOL",
        "GABORTORUS_SINGULAR_TOL",
        "GABORTORUS_INVERTIBILITY_RATIO",
        "GABORTORUS_DENSITY_TOL",
        "GABORTORUS_DETERMINISTIC",
        "GABORTORUS_WORKERS",
        "GABORTORUS_LOG_LEVEL",
    ):
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


def test_default_tolerances(clean_env):
    tolerances = get_tolerances()
    assert tolerances.frame_ratio == 1e-8
    assert tolerances.finite_identity == 1e-10
    assert tolerances.continuum_identity == 1e-8
    assert tolerances.tail == 1e-12
    assert tolerances.density == 0.05


def test_environment_and_overrides(clean_env):
    clean_env.setenv("GABORTORUS_FINITE_TOL", "1e-9")
    assert get_tolerances().finite_identity == 1e-9
    assert get_tolerances({"finite_identity": 1e-6}).finite_identity == 1e-6

    clean_env.setenv("GABORTORUS_TAIL_TOL", "tiny")
    with pytest.raises(ValueError):
        get_tolerances()


def test_execution_config(clean_env):
    execution = get_execution_config()
    assert execution.deterministic is True
    assert execution.workers == 1

    clean_env.setenv("GABORTORUS_DETERMINISTIC", "false")
    clean_env.setenv("GABORTORUS_WORKERS", "4")
    execution = get_execution_config()
    assert execution.deterministic is False
    assert execution.workers == 4
    assert get_execution_config(True).deterministic is True


def test_parse_defaults():
    config = parse_run_config({})
    assert config.model_order() == ModelOrder.finite(12)
    assert config.window == {"gaussian": np.pi}
    assert config.seed == 0
    with pytest.raises(ConfigError):
        config.lattice_for()
    with pytest.raises(ConfigError):
        config.input_signal()


@pytest.mark.parametrize("data", [
    {"model": {"kind": "finite", "L": 1}},
    {"model": {"kind": "continuum", "extent": 3.0, "step": 2.0}},
    {"window": {"chirp": 1.0}},
    {"window": {"gaussian": 1.0, "delta": 0}},
    {"tolerances": {"epsilon": 1e-3}},
    {"seed": -1},
    {"model": {"kind": "finite", "L": [12]}},
    {"model": {"kind": "finite", "L": "12"}},
    {"model": {"kind": "finite", "L": 12.5}},
    {"model": {"kind": "finite"}},
    {"model": {"kind": "continuum", "step": "fine"}},
    {"lattice": {"a": 2}},
    {"lattice": {"a": "2", "b": 2}},
    {"lattice": {"a": True, "b": 2}},
    {"lattice": {"generator": "identity"}},
    [1, 2],
])
def test_invalid_configs(data):
    with pytest.raises(ConfigError):
        parse_run_config(data)


def test_model_order_coerced_to_int():
    config = parse_run_config({"model": {"kind": "finite", "L": 12.0}, "lattice": {"a": 3, "b": 4}})
    assert config.model == {"kind": "finite", "L": 12}
    assert config.lattice_for().a == 3


def test_lattice_math_errors_surface_when_resolved():
    config = parse_run_config({"model": {"kind": "finite", "L": 12}, "lattice": {"a": 5, "b": 2}})
    with pytest.raises(InvalidLatticeError):
        config.lattice_for()


def test_descriptors_build_signals():
    config = parse_run_config({"model": {"kind": "finite", "L": 8}, "window": "delta", "signal": {"modulation": 2}})
    assert np.array_equal(config.window_signal().values, Signal.delta(ModelOrder.finite(8)).values)

    signal = config.input_signal()
    expected = np.exp(2j * np.pi * 2 * np.arange(8) / 8)
    assert np.allclose(signal.values, expected)

    shifted = config.build({"delta": 3})
    assert np.argmax(np.abs(shifted.values)) == 3


def test_siegel_needs_gaussian_window():
    config = parse_run_config({"window": {"gaussian": {"re": 2.0, "im": 1.0}}})
    assert config.siegel().T[0, 0] == pytest.approx(2.0 + 1.0j)
    with pytest.raises(ConfigError):
        parse_run_config({"window": "delta"}).siegel()


def test_file_descriptor_resolves_against_config_dir(tmp_path):
    model = ModelOrder.finite(6)
    write_signal_csv(Signal.delta(model, 2), tmp_path / "signal.csv")
    config_path = tmp_path / "run.json"
    config_path.write_text('{"model": {"kind": "finite", "L": 6}, "signal": {"file": "signal.csv"}}')

    config = load_run_config(config_path)
    assert np.argmax(np.abs(config.input_signal().values)) == 2


def test_yaml_config(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("model:\n  kind: finite\n  L: 16\nlattice:\n  a: 2\n  b: 4\nseed: 3\n")
    config = load_run_config(path)
    D = config.lattice_for()
    assert (D.a, D.b) == (2, 4)
    assert config.seed == 3

    broken = tmp_path / "broken.yaml"
    broken.write_text("model: [\n")
    with pytest.raises(ConfigError):
        load_run_config(broken)
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / "missing.json")


def test_shipped_configs_load():
    for path in sorted(CONFIG_DIR.iterdir()):
        if path.suffix in (".json", ".yaml", ".yml"):
            config = load_run_config(path)
            config.model_order()
