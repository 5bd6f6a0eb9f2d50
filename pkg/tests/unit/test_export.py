#!/usr/bin/env python3
"""
Tests for the CSV, PGM and JSON file formats.
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

import json

import numpy as np
import pytest

from gabortorus.errors import ConfigError
from gabortorus.export import (
    dumps,
    read_json,
    read_sequence_json,
    read_signal_csv,
    to_pgm,
    write_pgm,
    write_sequence_json,
    write_signal_csv,
    write_tf_csv,
)
from gabortorus.nctorus import TwistedSequence
from gabortorus.phase_space import ModelOrder, SeparableLattice, Signal
from gabortorus.transforms import stft


def test_finite_signal_csv(tmp_path):
    model = ModelOrder.finite(5)
    signal = Signal.create(model, np.arange(5) + 0.5j)
    path = write_signal_csv(signal, tmp_path / "signal.csv")

    lines = path.read_text().splitlines()
    assert lines[0] == "index,re,im"
    assert lines[3] == "2,2,0.5"

    loaded = read_signal_csv(path)
    assert loaded.model == model
    assert np.array_equal(loaded.values, signal.values)


def test_continuum_signal_csv_infers_grid(tmp_path):
    model = ModelOrder.continuum(extent=2.0, step=0.25)
    signal = Signal.create(model, np.exp(-np.pi * model.time_axis() ** 2))
    path = write_signal_csv(signal, tmp_path / "grid.csv")
    assert path.read_text().startswith("t,re,im\n")

    loaded = read_signal_csv(path)
    assert loaded.model == model
    assert np.allclose(loaded.values, signal.values, atol=0)


def test_signal_csv_errors(tmp_path):
    with pytest.raises(ConfigError):
        read_signal_csv(tmp_path / "missing.csv")

    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    with pytest.raises(ConfigError):
        read_signal_csv(bad)

    grid = tmp_path / "grid.csv"
    grid.write_text("t,re,im\n0,1,0\n0.5,1,0\n")
    with pytest.raises(ConfigError):
        read_signal_csv(grid, ModelOrder.finite(2))


def test_tf_csv_has_one_row_per_grid_point(tmp_path):
    model = ModelOrder.finite(4)
    tf = stft(Signal.delta(model), Signal.delta(model))
    path = write_tf_csv(tf, tmp_path / "stft.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "x,omega,re,im"
    assert len(lines) == 1 + 16


def test_pgm_orientation():
    magnitude = np.array([[0.0, 1.0], [0.5, 0.0]])  # [x, omega]
    text = to_pgm(magnitude, maxval=10)
    lines = text.splitlines()
    assert lines[:3] == ["P2", "2 2", "10"]
    # top row is the highest omega
    assert lines[3] == "10 0"
    assert lines[4] == "0 5"


def test_write_pgm(tmp_path):
    model = ModelOrder.finite(8)
    path = write_pgm(stft(Signal.delta(model), Signal.delta(model)), tmp_path / "out" / "s.pgm")
    assert path.read_text().startswith("P2\n8 8\n255\n")


def test_json_serializes_numpy_and_complex(tmp_path):
    text = dumps({"b": np.float64(1.5), "a": np.array([1, 2]), "z": 1 + 2j, "ok": np.bool_(True)})
    data = json.loads(text)
    assert list(data) == ["a", "b", "ok", "z"]
    assert data["z"] == {"re": 1.0, "im": 2.0}
    assert data["ok"] is True

    with pytest.raises(ConfigError):
        read_json(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(ConfigError):
        read_json(broken)


def test_sequence_json(tmp_path):
    D = SeparableLattice(ModelOrder.continuum(), 0.8, 0.8)
    sequence = TwistedSequence(D, {(0, 0): 1.0, (1, -1): 0.25j}, truncation_radius=2.0, tail_bound=1e-3, certified=False)
    path = write_sequence_json(sequence, tmp_path / "seq.json")
    loaded = read_sequence_json(path)
    assert loaded.distance(sequence) == 0.0
    assert loaded.certified is False
    assert loaded.truncation_radius == 2.0

    bad = tmp_path / "bad.json"
    bad.write_text('{"coeffs": []}')
    with pytest.raises(ConfigError):
        read_sequence_json(bad)
