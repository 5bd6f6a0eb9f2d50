"""
Residual routines behind the identity catalogue.

Each routine takes a numpy Generator plus keyword parameters from the
catalogue and returns (largest residual, details). Random signals are
normalized so that residuals are comparable across model orders.
"""

import logging
import math
from typing import Any, Dict, Iterator, List, Sequence, Tuple

import numpy as np

from ..errors import ConfigError
from ..gabor import (
    GaborSystem,
    dual_window,
    figa_residual,
    frame_operator,
    frame_type_operator,
    janssen_operator,
    janssen_residual,
    poisson_residual,
    wexler_raz_residual,
)
from ..nctorus import (
    TwistedSequence,
    associativity_residual,
    bimodule_compatibility_residual,
    involution,
    representation_matrix,
    right_compatibility_residual,
    rieffel_inner,
    twisted_convolution,
)
from ..phase_space import ModelOrder, SeparableLattice, Signal, symplectic_matrix
from ..theta import (
    SiegelMatrix,
    functional_equation_residual,
    gaussian_ambiguity,
    gaussian_window,
    gt_matrix,
    invertibility_sweep,
    quantum_theta,
    theta_twist_residual,
)
from ..transforms import TFMatrix, cross_wigner, fourier_rotation_residual, moyal_residual, stft_at

logger = logging.getLogger(__name__)

Outcome = Tuple[float, Dict[str, Any]]


# ========================================
# Inputs
# ========================================

def random_signal(model: ModelOrder, rng: np.random.Generator) -> Signal:
    """Unit-norm complex Gaussian noise."""
    values = rng.standard_normal(model.size) + 1j * rng.standard_normal(model.size)
    signal = Signal.create(model, values)
    return signal * (1.0 / signal.norm())


def divisor_lattices(model: ModelOrder) -> Iterator[SeparableLattice]:
    """Every separable lattice a Z_L x b Z_L with a, b dividing L."""
    divisors = [d for d in range(1, model.L + 1) if model.L % d == 0]
    for a in divisors:
        for b in divisors:
            yield SeparableLattice(model, a, b)


def gaussian(model: ModelOrder, tau: complex) -> Signal:
    return gaussian_window(SiegelMatrix.scalar(tau), model)


def _continuum(extent: float, step: float) -> ModelOrder:
    return ModelOrder.continuum(extent=extent, step=step)


def _random_siegel(rng: np.random.Generator, N: int) -> SiegelMatrix:
    A = rng.standard_normal((N, N))
    B = rng.standard_normal((N, N))
    return SiegelMatrix(A @ A.T + 0.5 * np.eye(N) + 1j * (B + B.T) / 2.0)


# ========================================
# Transforms
# ========================================

def moyal(rng: np.random.Generator, L_values: Sequence[int] = (4, 8, 16, 32), trials: int = 100) -> Outcome:
    worst: Dict[str, float] = {}
    for L in L_values:
        model = ModelOrder.finite(L)
        worst[str(L)] = max(
            moyal_residual(*(random_signal(model, rng) for _ in range(4))) for _ in range(trials)
        )
    return max(worst.values()), {"per_L": worst}


def fourier_rotation(rng: np.random.Generator, L_values: Sequence[int] = (6, 8, 15), trials: int = 5) -> Outcome:
    worst: Dict[str, float] = {}
    for L in L_values:
        model = ModelOrder.finite(L)
        worst[str(L)] = max(
            fourier_rotation_residual(random_signal(model, rng), random_signal(model, rng)) for _ in range(trials)
        )
    return max(worst.values()), {"per_L": worst}


def wigner_methods(rng: np.random.Generator, L_values: Sequence[int] = (8, 16), trials: int = 5) -> Outcome:
    """Both evaluation paths of the cross-Wigner distribution agree; W(f, f) is real."""
    worst = 0.0
    for L in L_values:
        model = ModelOrder.finite(L)
        for _ in range(trials):
            f, g = random_signal(model, rng), random_signal(model, rng)
            by_stft = cross_wigner(f, g, "stft").values
            direct = cross_wigner(f, g, "direct").values
            auto = cross_wigner(f, f).values
            worst = max(worst, float(np.max(np.abs(by_stft - direct))), float(np.max(np.abs(auto.imag))))
    return worst, {}


# ========================================
# Gabor duality identities
# ========================================

def figa_finite(rng: np.random.Generator, L_values: Sequence[int] = (4, 8, 12, 16), trials: int = 2) -> Outcome:
    worst: Dict[str, float] = {}
    for L in L_values:
        model = ModelOrder.finite(L)
        residuals = [
            figa_residual(*(random_signal(model, rng) for _ in range(4)), D)
            for D in divisor_lattices(model)
            for _ in range(trials)
        ]
        worst[str(L)] = max(residuals)
    return max(worst.values()), {"per_L": worst}


def figa_continuum(
    rng: np.random.Generator,
    a: float = 0.8,
    b: float = 0.8,
    extent: float = 16.0,
    step: float = 1.0 / 16,
    radius: float = 8.0,
    taus: Sequence[Sequence[float]] = ((3.14159, 0.0), (3.14159, 1.0), (6.28318, 0.0), (1.5708, -0.5)),
) -> Outcome:
    """Quadruples of generalized Gaussians (taus given as [re, im])."""
    model = _continuum(extent, step)
    D = SeparableLattice(model, a, b)
    windows = [gaussian(model, complex(re, im)) for re, im in taus]
    residuals = []
    for _ in range(2):
        f1, f2, g1, g2 = (windows[i] for i in rng.permutation(len(windows)))
        residuals.append(figa_residual(f1, f2, g1, g2, D, radius))
    return max(residuals), {"residuals": residuals}


def janssen_finite(rng: np.random.Generator, L_values: Sequence[int] = (4, 8, 12, 16)) -> Outcome:
    worst: Dict[str, float] = {}
    for L in L_values:
        model = ModelOrder.finite(L)
        worst[str(L)] = max(
            janssen_residual(GaborSystem(random_signal(model, rng), D)) for D in divisor_lattices(model)
        )
    return max(worst.values()), {"per_L": worst}


def theta_vs_janssen(
    rng: np.random.Generator,
    a: float = 0.8,
    b: float = 0.8,
    extent: float = 16.0,
    step: float = 1.0 / 16,
    radius: float = 8.0,
) -> Outcome:
    """Closed-form theta coefficients against grid-computed Janssen coefficients of g_pi."""
    model = _continuum(extent, step)
    T = SiegelMatrix.scalar(np.pi)
    D = SeparableLattice(model, a, b)
    system = GaborSystem(gaussian_window(T, model), D, {"gaussian": np.pi}, radius=radius)
    janssen = janssen_operator(system)
    theta = quantum_theta(T, D, radius=radius)
    return theta.coeffs.distance(janssen), {"coefficients": len(janssen.coeffs)}


def reconstruction(rng: np.random.Generator, L: int = 12, a: int = 2, b: int = 2) -> Outcome:
    """Dual and tight window reconstruction plus Wexler-Raz biorthogonality."""
    model = ModelOrder.finite(L)
    system = GaborSystem(gaussian(model, np.pi), SeparableLattice(model, a, b), {"gaussian": np.pi})
    gamma = dual_window(system, "dual")
    tight = dual_window(system, "tight")
    f = random_signal(model, rng)

    residuals = {
        "dual": (frame_type_operator(system, gamma, f) - f).norm(),
        "tight": (frame_operator(system.with_atom(tight), f) - f).norm(),
        "wexler_raz": wexler_raz_residual(system, gamma),
    }
    return max(residuals.values()), residuals


def _random_tf(model: ModelOrder, rng: np.random.Generator) -> TFMatrix:
    n = model.size
    values = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return TFMatrix(model, values, model.time_axis(), model.frequency_axis(), model.tf_cell)


def poisson_finite(rng: np.random.Generator, L_values: Sequence[int] = (4, 8, 12)) -> Outcome:
    worst: Dict[str, float] = {}
    for L in L_values:
        model = ModelOrder.finite(L)
        worst[str(L)] = max(poisson_residual(_random_tf(model, rng), D) for D in divisor_lattices(model))
    return max(worst.values()), {"per_L": worst}


def poisson_continuum(
    rng: np.random.Generator,
    lattices: Sequence[Sequence[float]] = ((1.0, 1.0), (0.5, 0.5), (0.25, 2.0)),
    extent: float = 16.0,
    step: float = 1.0 / 16,
) -> Outcome:
    """The symplectic Gaussian e^{-pi(x^2 + w^2)} summed over grid-commensurate lattices."""
    model = _continuum(extent, step)
    xs, ws = np.meshgrid(model.time_axis(), model.frequency_axis(), indexing="ij")
    F = TFMatrix(model, np.exp(-np.pi * (xs ** 2 + ws ** 2)), model.time_axis(), model.frequency_axis(), model.tf_cell)
    residuals = {f"{a}x{b}": poisson_residual(F, SeparableLattice(model, a, b)) for a, b in lattices}
    return max(residuals.values()), residuals


# ========================================
# Algebra identities
# ========================================

def _random_sequence(lattice: SeparableLattice, rng: np.random.Generator) -> TwistedSequence:
    keys = lattice.keys()
    values = rng.standard_normal(len(keys)) + 1j * rng.standard_normal(len(keys))
    return TwistedSequence(lattice, dict(zip(keys, values / len(keys))))


def representation_axioms(rng: np.random.Generator, L: int = 4, a: int = 1, b: int = 1, pairs: int = 1000) -> Outcome:
    """pi(a # b) = pi(a) pi(b) and pi(a*) = pi(a)^H on random sequences."""
    lattice = SeparableLattice(ModelOrder.finite(L), a, b)
    homomorphism = involutive = 0.0
    for _ in range(pairs):
        x, y = _random_sequence(lattice, rng), _random_sequence(lattice, rng)
        X, Y = representation_matrix(x), representation_matrix(y)
        homomorphism = max(homomorphism, float(np.max(np.abs(representation_matrix(twisted_convolution(x, y)) - X @ Y))))
        involutive = max(involutive, float(np.max(np.abs(representation_matrix(involution(x)) - X.conj().T))))
    return max(homomorphism, involutive), {"homomorphism": homomorphism, "involution": involutive}


def associativity_finite(rng: np.random.Generator, L_values: Sequence[int] = (4, 8)) -> Outcome:
    worst: Dict[str, float] = {}
    for L in L_values:
        model = ModelOrder.finite(L)
        worst[str(L)] = max(
            associativity_residual(*(random_signal(model, rng) for _ in range(3)), D) for D in divisor_lattices(model)
        )
    return max(worst.values()), {"per_L": worst}


def associativity_continuum(
    rng: np.random.Generator,
    a: float = 0.8,
    b: float = 0.8,
    extent: float = 16.0,
    step: float = 1.0 / 16,
    radius: float = 8.0,
) -> Outcome:
    model = _continuum(extent, step)
    D = SeparableLattice(model, a, b)
    f, g, k = gaussian(model, np.pi), gaussian(model, np.pi * (1 + 0.5j)), gaussian(model, 2 * np.pi)
    residual = associativity_residual(f, g, k, D, radius)
    return residual, {}


def bimodule_compatibility(rng: np.random.Generator, L: int = 8, a: int = 2, b: int = 4) -> Outcome:
    """<a.f, g>_right = <f, a*.g>_right and _left<f.c, g> = _left<f, g.c*>."""
    model = ModelOrder.finite(L)
    D = SeparableLattice(model, a, b)
    f, g, h = (random_signal(model, rng) for _ in range(3))
    left_element = _random_sequence(D, rng)
    right_element = rieffel_inner("right", h, random_signal(model, rng), D)
    residuals = {
        "left": bimodule_compatibility_residual(left_element, f, g, D),
        "right": right_compatibility_residual(right_element, f, g, D),
    }
    return max(residuals.values()), residuals


# ========================================
# Gaussians and thetas
# ========================================

def gt_structure(
    rng: np.random.Generator,
    draws: int = 100,
    N_values: Sequence[int] = (1, 2),
    part: str = "both",
) -> Outcome:
    """
    G_T = S^T S and G_T^T J G_T = J for random Siegel matrices.

    `part` selects the reported residual: "factorization", "symplectic" or
    "both" (the larger); details always carry both.
    """
    if part not in ("factorization", "symplectic", "both"):
        raise ConfigError(f"unknown gt_structure part: {part!r}")
    factorization = symplectic = 0.0
    for N in N_values:
        J = symplectic_matrix(N)
        for _ in range(draws):
            G, S = gt_matrix(_random_siegel(rng, N))
            factorization = max(factorization, float(np.max(np.abs(G - S.T @ S))))
            symplectic = max(symplectic, float(np.max(np.abs(G.T @ J @ G - J))))
    details = {"factorization": factorization, "symplectic": symplectic}
    if part == "both":
        return max(factorization, symplectic), details
    return details[part], details


def ambiguity_vs_stft(
    rng: np.random.Generator,
    radius: float = 6.0,
    a: float = 0.8,
    b: float = 0.8,
    taus: Sequence[Sequence[float]] = ((3.14159, 0.0), (3.14159, 0.94)),
    extent: float = 16.0,
    step: float = 1.0 / 16,
) -> Outcome:
    """Closed-form <g_T, pi(z) g_T> against the sampled STFT on lattice points within radius."""
    model = _continuum(extent, step)
    D = SeparableLattice(model, a, b)
    keys, points = D.points_within(radius)
    residuals: Dict[str, float] = {}
    for re, im in taus:
        T = SiegelMatrix.scalar(complex(re, im))
        g = gaussian_window(T, model)
        sampled = stft_at(g, g, [D.tf_point(tuple(k)) for k in keys])
        closed = np.array([gaussian_ambiguity(T, p) for p in points])
        residuals[f"{re}+{im}i"] = float(np.max(np.abs(sampled - closed)))
    return max(residuals.values()), {"points": len(keys), "per_T": residuals}


def theta_functional_equation(
    rng: np.random.Generator, a: float = 0.8, b: float = 0.8, radius: float = 8.0, random_points: int = 10, spread: float = 1.0
) -> Outcome:
    """Theta functional equation at x = 0 and at random x."""
    D = SeparableLattice(ModelOrder.continuum(), a, b)
    T = SiegelMatrix.scalar(np.pi)
    points: List[np.ndarray] = [np.zeros(2)] + [rng.uniform(-spread, spread, 2) for _ in range(random_points)]
    residuals = [functional_equation_residual(T, D, x, radius) for x in points]
    return max(residuals), {"at_origin": residuals[0], "points": len(points)}


def theta_twist(rng: np.random.Generator, a: float = 0.8, b: float = 0.8, taus: Sequence[Sequence[float]] = ((3.14159, 0.0), (2.0, 0.7))) -> Outcome:
    """Coefficient moduli follow c_0 e^{-(pi/2) Q(m, m)}; the element is self-adjoint."""
    D = SeparableLattice(ModelOrder.continuum(), a, b)
    residuals: Dict[str, float] = {}
    for re, im in taus:
        theta = quantum_theta(SiegelMatrix.scalar(complex(re, im)), D)
        residuals[f"{re}+{im}i"] = max(theta_twist_residual(theta), theta.adjoint_residual())
    return max(residuals.values()), residuals


def invertibility_frontier(
    rng: np.random.Generator,
    values: Sequence[float] = (0.49, 0.64, 0.81, 1.0, 1.21),
    L_min: int = 144,
    separation: float = 20.0,
) -> Outcome:
    """
    Count of violations: verdicts must be invertible exactly for ab < 1, and
    A/B at the largest invertible density must exceed separation times A/B at ab = 1.
    """
    reports = invertibility_sweep(values, L_min=L_min)
    violations = sum(1 for r in reports if r.invertible != (r.ab < 1.0))

    below = [r for r in reports if r.ab < 1.0]
    critical = [r for r in reports if math.isclose(r.ab, 1.0)]
    if below and critical and not below[-1].ratio >= separation * critical[0].ratio:
        violations += 1
    table = [
        {"ab": r.ab, "L": r.L, "a": r.a, "b": r.b, "ratio": r.ratio, "verdict": r.verdict} for r in reports
    ]
    return float(violations), {"sweep": table}


ROUTINES = {
    "moyal": moyal,
    "fourier_rotation": fourier_rotation,
    "wigner_methods": wigner_methods,
    "figa_finite": figa_finite,
    "figa_continuum": figa_continuum,
    "janssen_finite": janssen_finite,
    "theta_vs_janssen": theta_vs_janssen,
    "reconstruction": reconstruction,
    "poisson_finite": poisson_finite,
    "poisson_continuum": poisson_continuum,
    "representation_axioms": representation_axioms,
    "associativity_finite": associativity_finite,
    "associativity_continuum": associativity_continuum,
    "bimodule_compatibility": bimodule_compatibility,
    "gt_structure": gt_structure,
    "ambiguity_vs_stft": ambiguity_vs_stft,
    "theta_functional_equation": theta_functional_equation,
    "theta_twist": theta_twist,
    "invertibility_frontier": invertibility_frontier,
}
