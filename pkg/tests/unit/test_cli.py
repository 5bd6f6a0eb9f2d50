#!/usr/bin/env python3
"""
Tests for the command-line front end: outputs and exit codes.
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

import json

import numpy as np
import pytest

from gabortorus.cli import main
from gabortorus.phase_space import ModelOrder
from gabortorus.theta import SiegelMatrix, gaussian_window

CONFIG_DIR = Path(__file__).parent.parent.parent / "data" / "configs"


@pytest.fixture(autouse=True)
def deterministic_env(monkeypatch):
    # main() exports the run's mode; monkeypatch restores it afterwards
    monkeypatch.setenv("GABORTORUS_DETERMINISTIC", "true")


def write_config(tmp_path, data, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_framecheck_gaussian(tmp_path, capsys):
    code = main(["framecheck", "--config", str(CONFIG_DIR / "framecheck.json"), "--out", str(tmp_path)])
    assert code == 0

    report = json.loads((tmp_path / "framecheck.json").read_text())
    assert report["is_frame"] is True
    assert report["passed"] is True
    assert report["redundancy"] == pytest.approx(3.0)
    assert set(report["residuals"]) == {"janssen", "figa", "wexler_raz"}
    assert "redundancy=3" in capsys.readouterr().out


def test_framecheck_impulse_is_tight(tmp_path):
    code = main(["framecheck", "--config", str(CONFIG_DIR / "framecheck_delta.json"), "--out", str(tmp_path)])
    assert code == 0
    report = json.loads((tmp_path / "framecheck.json").read_text())
    assert report["A"] == pytest.approx(1.0)
    assert report["B"] == pytest.approx(1.0)
    assert report["atom_descriptor"] == {"delta": 0}


def test_framecheck_not_a_frame_is_a_verdict(tmp_path):
    config = write_config(tmp_path, {"model": {"kind": "finite", "L": 8}, "lattice": {"a": 4, "b": 4}})
    assert main(["framecheck", "--config", config, "--out", str(tmp_path / "out")]) == 0
    report = json.loads((tmp_path / "out" / "framecheck.json").read_text())
    assert report["is_frame"] is False
    assert "wexler_raz" not in report["residuals"]


def test_seed_override_is_recorded(tmp_path):
    main(["framecheck", "--config", str(CONFIG_DIR / "framecheck.json"), "--out", str(tmp_path), "--seed", "7"])
    assert json.loads((tmp_path / "framecheck.json").read_text())["seed"] == 7


def test_config_errors_exit_2(tmp_path, capsys):
    assert main(["framecheck", "--config", str(tmp_path / "missing.json")]) == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{ not json")
    assert main(["framecheck", "--config", str(broken)]) == 2
    no_lattice = write_config(tmp_path, {"model": {"kind": "finite", "L": 8}}, "no_lattice.json")
    assert main(["framecheck", "--config", no_lattice]) == 2
    assert "error:" in capsys.readouterr().err


def test_framecheck_rejects_continuum(tmp_path):
    code = main(["framecheck", "--config", str(CONFIG_DIR / "theta.json"), "--out", str(tmp_path)])
    assert code == 3


def test_spectrogram_outputs(tmp_path):
    code = main(["spectrogram", "--config", str(CONFIG_DIR / "spectrogram.yaml"), "--out", str(tmp_path)])
    assert code == 0

    pgm = (tmp_path / "spectrogram.pgm").read_text().split("\n")
    assert pgm[:3] == ["P2", "32 32", "255"]
    rows = (tmp_path / "stft.csv").read_text().splitlines()
    assert rows[0] == "x,omega,re,im"
    assert len(rows) == 1 + 32 * 32


def test_spectrogram_needs_signal(tmp_path):
    config = write_config(tmp_path, {"model": {"kind": "finite", "L": 8}})
    assert main(["spectrogram", "--config", config, "--out", str(tmp_path)]) == 2


def test_theta_writes_report_and_coefficients(tmp_path):
    config = write_config(tmp_path, {
        "model": {"kind": "continuum", "extent": 16.0, "step": 0.0625},
        "lattice": {"a": 0.8, "b": 0.8},
        "window": {"gaussian": 3.141592653589793},
        "options": {"radius": 8, "sweep": []},
    })
    assert main(["theta", "--config", config, "--out", str(tmp_path / "out")]) == 0

    report = json.loads((tmp_path / "out" / "theta.json").read_text())
    assert report["functional_eq_residual"] <= 1e-8
    assert "invertibility" not in report
    coeffs = json.loads((tmp_path / "out" / "theta_coeffs.json").read_text())
    assert len(coeffs["coeffs"]) == report["coeff_count"]


def test_theta_small_radius_exits_4(tmp_path):
    config = write_config(tmp_path, {
        "model": {"kind": "continuum"},
        "lattice": {"a": 0.8, "b": 0.8},
        "options": {"radius": 1, "sweep": []},
    })
    assert main(["theta", "--config", config, "--out", str(tmp_path)]) == 4


def test_theta_non_decaying_window_exits_3(tmp_path):
    config = write_config(tmp_path, {
        "model": {"kind": "continuum"},
        "lattice": {"a": 0.8, "b": 0.8},
        "window": {"gaussian": -1.0},
        "options": {"sweep": []},
    })
    assert main(["theta", "--config", config, "--out", str(tmp_path)]) == 3


def test_verify_all_subset(tmp_path, capsys):
    code = main(["verify-all", "--identity", "poisson", "--out", str(tmp_path), "--deterministic"])
    assert code == 0

    summary = json.loads((tmp_path / "verify.json").read_text())
    assert summary["passed"] is True
    assert set(summary["identities"]) == {"poisson"}
    assert capsys.readouterr().out.rstrip().endswith("2/2 checks passed")


GOLDEN_DIR = Path(__file__).parent.parent.parent / "data" / "golden"


def test_spectrogram_matches_golden_image(tmp_path):
    assert main(["spectrogram", "--config", str(CONFIG_DIR / "spectrogram.yaml"), "--out", str(tmp_path)]) == 0
    assert (tmp_path / "spectrogram.pgm").read_bytes() == (GOLDEN_DIR / "spectrogram_impulse.pgm").read_bytes()


def test_spectrogram_csv_of_impulse_is_reflected_window(tmp_path):
    assert main(["spectrogram", "--config", str(CONFIG_DIR / "spectrogram.yaml"), "--out", str(tmp_path)]) == 0

    model = ModelOrder.finite(32)
    window = gaussian_window(SiegelMatrix.scalar(np.pi), model).values
    data = np.loadtxt(tmp_path / "stft.csv", delimiter=",", skiprows=1).reshape(32, 32, 4)
    reflected = window[(-np.arange(32)) % 32]
    assert np.allclose(data[:, :, 2], reflected[:, None], atol=1e-12)
    assert np.allclose(data[:, :, 3], 0.0, atol=1e-12)


def test_framecheck_gaussian_L144_matches_golden_bounds(tmp_path):
    golden = json.loads((GOLDEN_DIR / "framecheck_gaussian_L144.json").read_text())
    main(["framecheck", "--config", str(CONFIG_DIR / "framecheck_L144.json"), "--out", str(tmp_path)])

    report = json.loads((tmp_path / "framecheck.json").read_text())
    assert report["is_frame"] is True
    assert report["A"] == pytest.approx(golden["A"], rel=golden["rel_tolerance"])
    assert report["B"] == pytest.approx(golden["B"], rel=golden["rel_tolerance"])
    assert report["A"] > 0.01 * report["B"]


def test_repeated_deterministic_runs_are_byte_identical(tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"
    for out in (first, second):
        assert main([
            "spectrogram", "--config", str(CONFIG_DIR / "spectrogram_modulation.json"),
            "--out", str(out), "--seed", "3", "--deterministic",
        ]) == 0
        assert main([
            "framecheck", "--config", str(CONFIG_DIR / "framecheck.json"),
            "--out", str(out), "--seed", "3", "--deterministic",
        ]) == 0

    for name in ("spectrogram.pgm", "stft.csv", "framecheck.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_malformed_model_order_exits_2(tmp_path):
    config = write_config(tmp_path, {"model": {"kind": "finite", "L": [12]}, "lattice": {"a": 2, "b": 2}})
    assert main(["framecheck", "--config", config, "--out", str(tmp_path)]) == 2


def test_lattice_missing_step_exits_2(tmp_path):
    config = write_config(tmp_path, {"model": {"kind": "finite", "L": 12}, "lattice": {"a": 2}})
    assert main(["framecheck", "--config", config, "--out", str(tmp_path)]) == 2


def test_lattice_step_not_dividing_order_exits_3(tmp_path):
    config = write_config(tmp_path, {"model": {"kind": "finite", "L": 12}, "lattice": {"a": 5, "b": 2}})
    assert main(["framecheck", "--config", config, "--out", str(tmp_path)]) == 3
