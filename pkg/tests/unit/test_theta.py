#!/usr/bin/env python3
"""
Tests for generalized Gaussians, quantum thetas, theta series and the
invertibility probe.
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

import math

import numpy as np
import pytest

from gabortorus.errors import (
    InsufficientRadiusError,
    InvalidModelError,
    LatticeApproximationError,
    NonDecayingError,
)
from gabortorus.gabor import GaborSystem, janssen_operator
from gabortorus.phase_space import ModelOrder, SeparableLattice, symplectic_matrix
from gabortorus.theta import (
    QuantumTheta,
    SiegelMatrix,
    ambiguity_form,
    approximate_density,
    fit_decay,
    functional_equation_residual,
    gaussian_ambiguity,
    gaussian_window,
    gt_matrix,
    invertibility_probe,
    invertibility_sweep,
    quantum_theta,
    theta_report,
    theta_series,
    theta_twist_residual,
)
from gabortorus.transforms import stft_at


def test_siegel_matrix_validation():
    with pytest.raises(InvalidModelError):
        SiegelMatrix(np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(NonDecayingError):
        SiegelMatrix.scalar(-1.0)
    with pytest.raises(NonDecayingError):
        SiegelMatrix.scalar(1.0, tag="siegel")

    f_T = SiegelMatrix.scalar(1j, tag="siegel")
    assert f_T.to_decay().T[0, 0] == pytest.approx(np.pi)
    assert SiegelMatrix.from_descriptor({"re": 2.0, "im": 0.5}).T[0, 0] == pytest.approx(2 + 0.5j)


def test_siegel_tag_never_converts_implicitly():
    with pytest.raises(NonDecayingError):
        gaussian_window(SiegelMatrix.scalar(1j, tag="siegel"), ModelOrder.finite(8))


@pytest.mark.parametrize("T", [
    SiegelMatrix.scalar(np.pi),
    SiegelMatrix.scalar(2.0 + 0.7j),
    SiegelMatrix(np.array([[2.0 + 0.3j, 0.4 - 0.2j], [0.4 - 0.2j, 1.5 + 1.0j]])),
])
def test_gt_matrix_is_symplectic_and_factorizes(T):
    G, S = gt_matrix(T)
    J = symplectic_matrix(T.N)
    assert np.allclose(G, S.T @ S, atol=1e-12)
    assert np.allclose(G.T @ J @ G, J, atol=1e-10)
    assert np.allclose(G, G.T)


def test_ambiguity_closed_form():
    T = SiegelMatrix.scalar(2.0 + 0.7j)
    assert gaussian_ambiguity(T, [0.0, 0.0]).real == pytest.approx(math.sqrt(np.pi / 4.0))

    Q = ambiguity_form(T)
    norm_sq = gaussian_ambiguity(T, [0.0, 0.0]).real
    for z in ([0.5, 0.0], [0.3, -1.1], [-0.8, 0.4]):
        z = np.array(z)
        expected = norm_sq * math.exp(-0.5 * np.pi * z @ Q @ z)
        assert abs(gaussian_ambiguity(T, z)) == pytest.approx(expected, rel=1e-10)


def test_ambiguity_matches_sampled_inner_products():
    model = ModelOrder.continuum()
    T = SiegelMatrix.scalar(np.pi * (1 + 0.3j))
    g = gaussian_window(T, model)
    D = SeparableLattice(model, 0.8, 0.8)
    keys, points = D.points_within(4.0)
    sampled = stft_at(g, g, [D.tf_point(tuple(k)) for k in keys])
    closed = np.array([gaussian_ambiguity(T, p) for p in points])
    assert np.max(np.abs(sampled - closed)) <= 1e-8


def test_quantum_theta_coefficients():
    T = SiegelMatrix.scalar(2.0 + 0.7j)
    D = SeparableLattice(ModelOrder.continuum(), 0.8, 0.8)
    theta = quantum_theta(T, D)
    assert theta.coeffs.twist == 1
    assert theta.coeffs.lattice.a == pytest.approx(1.25)
    assert theta.tail_bound <= 1e-12
    assert theta.c0 == pytest.approx(math.sqrt(np.pi / 4.0) / 0.64)
    assert theta.adjoint_residual() <= 1e-12
    assert theta_twist_residual(theta) <= 1e-10
    assert fit_decay(theta) > 0


def test_quantum_theta_matches_janssen_coefficients():
    model = ModelOrder.continuum()
    T = SiegelMatrix.scalar(np.pi)
    D = SeparableLattice(model, 0.8, 0.8)
    system = GaborSystem(gaussian_window(T, model), D, radius=8.0)
    theta = quantum_theta(T, D, radius=8.0)
    assert theta.coeffs.distance(janssen_operator(system)) <= 1e-8


def test_finite_quantum_theta_is_the_janssen_element():
    model = ModelOrder.finite(12)
    T = SiegelMatrix.scalar(np.pi)
    D = SeparableLattice(model, 2, 3)
    theta = quantum_theta(T, D)
    assert theta.truncation_radius is None
    system = GaborSystem(gaussian_window(T, model), D)
    assert theta.coeffs.distance(janssen_operator(system)) <= 1e-12


def test_quantum_theta_radius_too_small():
    D = SeparableLattice(ModelOrder.continuum(), 0.8, 0.8)
    with pytest.raises(InsufficientRadiusError) as info:
        quantum_theta(SiegelMatrix.scalar(np.pi), D, radius=1.0)
    assert info.value.tail_bound > 0


@pytest.mark.parametrize("x", [[0.0, 0.0], [0.3, -0.2], [-0.9, 0.6]])
def test_functional_equation_separable(x):
    D = SeparableLattice(ModelOrder.continuum(), 0.8, 0.8)
    assert functional_equation_residual(SiegelMatrix.scalar(np.pi), D, x, radius=8.0) <= 1e-8


def test_functional_equation_generator_lattice():
    D = SeparableLattice.from_generator(ModelOrder.continuum(), np.array([[0.8, 0.3], [0.0, 0.9]]))
    T = SiegelMatrix.scalar(2.0 + 0.5j)
    assert functional_equation_residual(T, D, [0.2, 0.1]) <= 1e-8


def test_theta_series_radius_checks():
    D = SeparableLattice(ModelOrder.continuum(), 0.8, 0.8)
    T = SiegelMatrix.scalar(np.pi)
    value = theta_series(T, D, [0.0, 0.0])
    assert value.real > 1.0
    assert abs(value.imag) <= 1e-12
    with pytest.raises(InsufficientRadiusError):
        theta_series(T, D, [0.0, 0.0], radius=0.5)
    with pytest.raises(InsufficientRadiusError):
        theta_series(T, D, [3.0, 0.0], radius=2.0)


def test_theta_report_continuum():
    D = SeparableLattice(ModelOrder.continuum(), 0.8, 0.8)
    report = theta_report(SiegelMatrix.scalar(np.pi), D, radius=8.0)
    assert report["functional_eq_residual"] <= 1e-8
    assert report["coeff_count"] > 1
    assert set(report["value_at_0"]) == {"re", "im"}


def test_approximate_density():
    assert approximate_density(1.0, 144, 0.05) == (12, 12)
    assert approximate_density(0.81, 150, 0.05) == (5, 25)
    with pytest.raises(LatticeApproximationError):
        approximate_density(0.81, 144, 0.05)
    with pytest.raises(LatticeApproximationError):
        approximate_density(-1.0, 144, 0.05)


def test_invertibility_probe_flips_at_critical_density():
    below = invertibility_probe(0.7, 0.7, 144)
    assert below.invertible
    assert (below.a, below.b) == (8, 9)

    critical = invertibility_probe(1.0, 1.0, 144)
    assert not critical.invertible
    assert critical.ratio < below.ratio
    assert critical.to_dict()["verdict"] == "not-invertible"


def test_functional_equation_radius_requirements():
    D = SeparableLattice(ModelOrder.continuum(), 0.8, 0.8)
    T = SiegelMatrix.scalar(np.pi)
    for radius in (3.0, 4.0):
        with pytest.raises(InsufficientRadiusError):
            functional_equation_residual(T, D, [0.0, 0.0], radius=radius)

    residuals = [functional_equation_residual(T, D, [0.0, 0.0], radius=r) for r in (6.0, 8.0, 10.0)]
    assert residuals[0] <= 1e-12
    for coarse, fine in zip(residuals, residuals[1:]):
        assert fine <= coarse + 1e-15


def test_functional_equation_self_adjoint_lattice_is_exact():
    D = SeparableLattice(ModelOrder.continuum(), 1.0, 1.0)
    assert functional_equation_residual(SiegelMatrix.scalar(np.pi), D, [0.0, 0.0], radius=8.0) == 0.0


def test_classical_theta_on_integer_lattice():
    T = SiegelMatrix.scalar(1j, tag="siegel").to_decay()
    D = SeparableLattice(ModelOrder.continuum(), 1.0, 1.0)

    # T = pi gives G_T = diag(pi, 1/pi), so the sum separates
    slow = 0.0
    for m in range(-20, 21):
        for n in range(-20, 21):
            slow += math.exp(-np.pi ** 2 * m * m - n * n)
    value = theta_series(T, D, [0.0, 0.0])
    assert value.real == pytest.approx(slow, rel=1e-11)
    assert value.real == pytest.approx(1.7728206, abs=1e-7)
    assert abs(value.imag) <= 1e-14


def test_sweep_prefers_balanced_lattices():
    reports = {r.ab: r for r in invertibility_sweep([0.49, 0.81, 1.21], L_min=144)}
    assert (reports[0.49].L, reports[0.49].a, reports[0.49].b) == (144, 8, 9)
    assert (reports[0.81].L, reports[0.81].a, reports[0.81].b) == (154, 11, 11)
    assert (reports[1.21].L, reports[1.21].a, reports[1.21].b) == (160, 10, 20)
    assert reports[0.49].invertible and reports[0.81].invertible
    assert not reports[1.21].invertible


def test_theta_coefficients_decay_from_the_origin():
    D = SeparableLattice(ModelOrder.continuum(), 0.8, 0.8)
    theta = quantum_theta(SiegelMatrix.scalar(np.pi), D, radius=8.0)
    assert fit_decay(theta) > 0
    assert max(abs(v) for v in theta.coeffs.coeffs.values()) <= theta.c0

    grown = dict(theta.coeffs.coeffs)
    key = next(k for k in grown if any(k))
    grown[key] = 2.0 * theta.c0
    with pytest.raises(NonDecayingError):
        QuantumTheta(theta.coeffs.replace(coeffs=grown), theta.T, theta.D, theta.truncation_radius, theta.tail_bound)
