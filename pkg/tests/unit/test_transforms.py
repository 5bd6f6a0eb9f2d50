#!/usr/bin/env python3
"""
Tests for the DFT, STFT, cross-Wigner and symplectic Fourier transforms.
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

import numpy as np
import pytest

from gabortorus.errors import DegenerateWindowError, InvalidExponentError, UnsupportedModelError
from gabortorus.phase_space import ModelOrder, Signal, TFPoint, tf_shift
from gabortorus.theta import SiegelMatrix, gaussian_window
from gabortorus.transforms import (
    TFMatrix,
    cross_wigner,
    dft,
    fourier_rotation_residual,
    idft,
    modulation_norm,
    moyal_residual,
    stft,
    stft_at,
    symplectic_fourier,
)


def random_signal(model, rng):
    values = rng.standard_normal(model.size) + 1j * rng.standard_normal(model.size)
    return Signal.create(model, values / np.linalg.norm(values))


@pytest.mark.parametrize("L", [4, 7, 16])
def test_moyal_identity_finite(L):
    rng = np.random.default_rng(L)
    model = ModelOrder.finite(L)
    for _ in range(10):
        f1, f2, g1, g2 = (random_signal(model, rng) for _ in range(4))
        assert moyal_residual(f1, f2, g1, g2) <= 1e-10


def test_moyal_identity_on_periodic_grid():
    rng = np.random.default_rng(3)
    model = ModelOrder.continuum(extent=8.0, step=0.125)
    f1, f2, g1, g2 = (random_signal(model, rng) for _ in range(4))
    assert moyal_residual(f1, f2, g1, g2) <= 1e-10


@pytest.mark.parametrize("model", [ModelOrder.finite(12), ModelOrder.continuum(extent=8.0, step=0.125)])
def test_dft_inverse(model):
    f = random_signal(model, np.random.default_rng(0))
    back = idft(dft(f))
    assert back.model == model
    assert np.allclose(back.values, f.values, atol=1e-12)
    assert dft(f).norm() == pytest.approx(f.norm())


def test_stft_agrees_with_pointwise_inner_products():
    rng = np.random.default_rng(5)
    model = ModelOrder.finite(10)
    f, g = random_signal(model, rng), random_signal(model, rng)
    V = stft(f, g)
    for x, w in [(0, 0), (3, 7), (9, 1)]:
        assert V.value_at(x, w) == pytest.approx(f.inner(tf_shift(g, TFPoint(x, w, 10))))
    points = [TFPoint(x, w, 10) for x, w in [(2, 2), (5, 0)]]
    assert np.allclose(stft_at(f, g, points), [V.value_at(2, 2), V.value_at(5, 0)])


@pytest.mark.parametrize("L", [5, 9, 12, 16])
def test_stft_covariance_phase(L):
    rng = np.random.default_rng(6)
    model = ModelOrder.finite(L)
    f, g = random_signal(model, rng), random_signal(model, rng)
    base = stft(f, g).values
    w = np.arange(L)
    for y in range(L):
        for eta in range(L):
            shifted = stft(tf_shift(f, TFPoint(y, eta, L)), g).values
            phase = np.exp(-2j * np.pi * ((y * (w - eta)) % L) / L)
            expected = phase[None, :] * np.roll(base, (y, eta), axis=(0, 1))
            assert np.allclose(shifted, expected, atol=1e-12), (y, eta)


def test_dft_of_impulse():
    spectrum = dft(Signal.delta(ModelOrder.finite(4)))
    assert np.allclose(spectrum.values, 0.5)


def test_continuum_gaussian_is_fixed_by_dft():
    model = ModelOrder.continuum()
    g = gaussian_window(SiegelMatrix.scalar(np.pi), model)
    spectrum = dft(g)
    assert spectrum.model == model
    assert np.max(np.abs(spectrum.values - g.values)) <= 1e-8


def test_continuum_wigner_marginal_and_origin_value():
    model = ModelOrder.continuum()
    g = gaussian_window(SiegelMatrix.scalar(np.pi), model)
    W = cross_wigner(g, g)
    assert abs(W.total() - g.norm() ** 2) <= 1e-6

    i = int(np.argmin(np.abs(W.x_axis)))
    j = int(np.argmin(np.abs(W.omega_axis)))
    assert W.values[i, j].real > 0
    assert W.values[i, j].real == pytest.approx(np.sqrt(2.0), rel=1e-6)


def test_impulse_spectrogram_is_flat_along_frequency():
    model = ModelOrder.finite(16)
    g = gaussian_window(SiegelMatrix.scalar(np.pi), model)
    magnitude = stft(Signal.delta(model), g).magnitude()
    assert np.allclose(magnitude[0], magnitude[0, 0])
    assert np.argmax(magnitude[:, 0]) == 0


def test_degenerate_window_is_rejected():
    model = ModelOrder.finite(4)
    with pytest.raises(DegenerateWindowError):
        stft(Signal.delta(model), Signal.create(model, np.zeros(4)))


@pytest.mark.parametrize("model", [ModelOrder.finite(8), ModelOrder.finite(15), ModelOrder.continuum(extent=4.0, step=0.25)])
def test_fourier_rotation(model):
    rng = np.random.default_rng(7)
    assert fourier_rotation_residual(random_signal(model, rng), random_signal(model, rng)) <= 1e-10


def test_fourier_rotation_needs_square_grid():
    model = ModelOrder.continuum(extent=8.0, step=0.25)
    rng = np.random.default_rng(8)
    with pytest.raises(UnsupportedModelError):
        fourier_rotation_residual(random_signal(model, rng), random_signal(model, rng))


@pytest.mark.parametrize("model", [ModelOrder.finite(8), ModelOrder.continuum(extent=8.0, step=0.125)])
def test_cross_wigner_methods_agree(model):
    rng = np.random.default_rng(9)
    f, g = random_signal(model, rng), random_signal(model, rng)
    assert np.allclose(cross_wigner(f, g, "stft").values, cross_wigner(f, g, "direct").values, atol=1e-10)
    assert np.max(np.abs(cross_wigner(f, f).values.imag)) <= 1e-10


def test_cross_wigner_needs_even_order():
    model = ModelOrder.finite(7)
    f = Signal.delta(model)
    with pytest.raises(UnsupportedModelError):
        cross_wigner(f, f)


def test_symplectic_fourier_is_involutive():
    rng = np.random.default_rng(10)
    model = ModelOrder.finite(6)
    F = TFMatrix(
        model,
        rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)),
        model.time_axis(),
        model.frequency_axis(),
        model.tf_cell,
    )
    assert np.allclose(symplectic_fourier(symplectic_fourier(F)).values, F.values, atol=1e-12)


def test_modulation_norm_l2_is_product_of_norms():
    rng = np.random.default_rng(11)
    model = ModelOrder.finite(12)
    f, g = random_signal(model, rng), random_signal(model, rng)
    assert modulation_norm(f, g) == pytest.approx(f.norm() * g.norm(), rel=1e-10)
    assert modulation_norm(f, g, weight=2.0) > modulation_norm(f, g)
    with pytest.raises(InvalidExponentError):
        modulation_norm(f, g, p=0.5)
