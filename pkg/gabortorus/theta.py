"""
Generalized Gaussians and quantum theta functions.

- g_T(x) = e^{-<Tx, x>} for a complex symmetric T with Re T positive definite
  (the "decay" tag). The "siegel" tag stores the upper-half-space parameter
  of f_T(x) = e^{pi i <Tx, x>}; SiegelMatrix.to_decay converts explicitly.
- gt_matrix builds the symplectic matrix G_T that governs the Wigner data of
  g_T, with its factorization G_T = S^T S.
- quantum_theta expands the frame operator of G(g_T, D) over the adjoint
  lattice (closed-form Gaussian coefficients); theta_series evaluates the
  scalar lattice sum whose Poisson self-duality is the functional equation.
- invertibility_probe emulates a continuum density ab on Z_L and decides
  whether the Gaussian system (equivalently its quantum theta) is invertible.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg, special

from config.settings import Tolerances, get_tolerances

from .errors import (
    InsufficientRadiusError,
    InvalidModelError,
    LatticeApproximationError,
    NonDecayingError,
    UnsupportedModelError,
)
from .gabor import GaborSystem, frame_bounds
from .nctorus import TwistedSequence, involution
from .parallel import parallel_map
from .phase_space import (
    ModelOrder,
    SeparableLattice,
    Signal,
    TFPoint,
    adjoint_lattice,
    lattice_volume,
    symplectic_matrix,
)
from .transforms import stft_at

logger = logging.getLogger(__name__)

PointLike = Union[TFPoint, Sequence[float], np.ndarray]


# ========================================
# Siegel matrices
# ========================================

@dataclass(frozen=True, eq=False)
class SiegelMatrix:
    """
    Complex symmetric N x N matrix with a positivity convention.

    Attributes:
        T: The matrix
        tag: "decay" (Re T positive definite, parameter of g_T) or
            "siegel" (Im T positive definite, parameter of f_T)
    """

    T: np.ndarray
    tag: str = "decay"

    def __post_init__(self):
        T = np.atleast_2d(np.asarray(self.T, dtype=complex))
        if T.ndim != 2 or T.shape[0] != T.shape[1]:
            raise InvalidModelError(f"T must be a square matrix, got shape {T.shape}")
        if np.max(np.abs(T - T.T)) > 1e-12:
            raise InvalidModelError("T must be symmetric")
        if self.tag not in ("decay", "siegel"):
            raise InvalidModelError(f"unknown SiegelMatrix tag: {self.tag!r}")

        part = T.real if self.tag == "decay" else T.imag
        smallest = float(np.min(linalg.eigvalsh(part)))
        if smallest <= 0:
            which = "Re T" if self.tag == "decay" else "Im T"
            raise NonDecayingError(f"{which} is not positive definite (smallest eigenvalue {smallest:.3g})")
        object.__setattr__(self, "T", T)

    @classmethod
    def scalar(cls, value: complex, tag: str = "decay") -> "SiegelMatrix":
        return cls(np.array([[value]]), tag)

    @classmethod
    def from_descriptor(cls, descriptor: Union[float, List, Dict]) -> "SiegelMatrix":
        """
        Parse 3.14159, [[...]], {"re": ..., "im": ..., "tag": ...} or {"T": ..., "tag": ...}.
        """
        if isinstance(descriptor, dict):
            tag = descriptor.get("tag", "decay")
            if "T" in descriptor:
                return cls(np.asarray(descriptor["T"], dtype=complex), tag)
            real = np.asarray(descriptor.get("re", 0.0), dtype=float)
            imag = np.asarray(descriptor.get("im", 0.0), dtype=float)
            return cls(real + 1j * imag, tag)
        return cls(np.asarray(descriptor, dtype=complex))

    @property
    def N(self) -> int:
        return self.T.shape[0]

    def to_decay(self) -> "SiegelMatrix":
        """f_T = g_{-pi i T}: the decay-tagged parameter of the same Gaussian."""
        if self.tag == "decay":
            return self
        return SiegelMatrix(-1j * np.pi * self.T, "decay")

    def describe(self) -> Dict:
        return {"tag": self.tag, "re": self.T.real.tolist(), "im": self.T.imag.tolist()}


def _require_decay(T: SiegelMatrix) -> np.ndarray:
    if T.tag != "decay":
        raise NonDecayingError("expected a decay-tagged matrix; convert with SiegelMatrix.to_decay()")
    return T.T


# ========================================
# Gaussians
# ========================================

def gaussian_window(T: SiegelMatrix, model: ModelOrder) -> Signal:
    """
    Samples of g_T(t) = e^{-T t^2} on a one-dimensional model.

    The finite model uses the positions centered(n)/sqrt(L), periodized over
    Z_L. Continuum windows keep the analytic profile for off-grid shifts.
    """
    matrix = _require_decay(T)
    if T.N != 1:
        raise UnsupportedModelError("windows are sampled in one dimension")
    tau = complex(matrix[0, 0])
    profile = lambda t: np.exp(-tau * np.asarray(t, dtype=float) ** 2)

    positions = model.sample_positions()
    if not model.is_finite:
        return Signal.create(model, profile(positions), profile)

    period = math.sqrt(model.L)
    copies = int(math.ceil(math.sqrt(40.0 / tau.real) / period)) + 1
    values = sum(profile(positions + k * period) for k in range(-copies, copies + 1))
    return Signal.create(model, values)


def symplectic_form(N: int) -> np.ndarray:
    """J = [[0, I], [-I, 0]]."""
    return symplectic_matrix(N)


def _sqrtm_spd(matrix: np.ndarray) -> np.ndarray:
    eigenvalues, vectors = linalg.eigh(matrix)
    return (vectors * np.sqrt(eigenvalues)) @ vectors.T


def gt_matrix(T: SiegelMatrix) -> Tuple[np.ndarray, np.ndarray]:
    """
    The symplectic matrix of a generalized Gaussian and its factorization.

        G_T = [[R + I R^-1 I, I R^-1], [R^-1 I, R^-1]]
        S   = [[R^1/2, 0], [R^-1/2 I, R^-1/2]]           G_T = S^T S

    with R = Re T and I = Im T.

    Raises:
        NonDecayingError: If Re T is not positive definite
    """
    R, I = T.T.real, T.T.imag
    if np.min(linalg.eigvalsh(R)) <= 0:
        raise NonDecayingError("Re T must be positive definite to build G_T")
    R_inv = linalg.inv(R)
    G = np.block([[R + I @ R_inv @ I, I @ R_inv], [R_inv @ I, R_inv]])

    root = _sqrtm_spd(R)
    root_inv = linalg.inv(root)
    S = np.block([[root, np.zeros_like(R)], [root_inv @ I, root_inv]])
    return G, S


def ambiguity_form(T: SiegelMatrix) -> np.ndarray:
    """Q = G_{T/pi}, with |<g_T, pi(z) g_T>| = ||g_T||^2 e^{-(pi/2) Q(z, z)}."""
    return gt_matrix(SiegelMatrix(T.T / np.pi, T.tag))[0]


def _as_vector(z: PointLike, N: int) -> np.ndarray:
    if isinstance(z, TFPoint):
        if z.L is not None:
            raise UnsupportedModelError("closed-form Gaussian data lives in the continuum")
        z = [z.x, z.omega]
    vector = np.asarray(z, dtype=float).reshape(-1)
    if vector.shape[0] != 2 * N:
        raise InvalidModelError(f"expected a point of R^{2 * N}, got {vector.shape[0]} coordinates")
    return vector


def gaussian_ambiguity(T: SiegelMatrix, z: PointLike) -> complex:
    """
    <g_T, pi(z) g_T> in closed form (completion of squares):

        pi^{N/2} det(A)^{-1/2} exp(b^T A^-1 b / 4 - x^T conj(T) x),
        A = 2 Re T,  b = 2 conj(T) x - 2 pi i w
    """
    matrix = _require_decay(T)
    N = T.N
    vector = _as_vector(z, N)
    x, w = vector[:N], vector[N:]

    A = 2.0 * matrix.real
    b = 2.0 * np.conj(matrix) @ x - 2j * np.pi * w
    exponent = b @ linalg.solve(A, b) / 4.0 - x @ np.conj(matrix) @ x
    prefactor = np.pi ** (N / 2.0) / math.sqrt(linalg.det(A))
    return complex(prefactor * np.exp(exponent))


# ========================================
# Lattice tail bounds
# ========================================

def lattice_tail_bound(lattice: SeparableLattice, kappa: float, radius: float, scale: float = 1.0) -> float:
    """
    Bound on scale * sum_{|h| > radius} e^{-kappa |h|^2}, also valid for any translate of the lattice.

    Points in the shell r <= |h| < r + 1 are counted by the volume of the
    covering-radius-thickened shell over vol(lattice).
    """
    dim = lattice.dimension
    covering = 0.5 * float(np.linalg.norm(lattice.basis, 2)) * math.sqrt(dim)
    surface = 2.0 * math.pi ** (dim / 2.0) / special.gamma(dim / 2.0)
    volume = float(abs(np.linalg.det(lattice.basis)))

    total = 0.0
    r = float(radius)
    for _ in range(10000):
        count = surface * (r + 1.0 + covering) ** (dim - 1) * (1.0 + 2.0 * covering) / volume
        term = count * math.exp(-kappa * r * r)
        total += term
        if r > radius and term <= 1e-30 * total:
            break
        r += 1.0
    return scale * total


def default_radius(
    kappa: float,
    lattice: SeparableLattice,
    tolerance: Optional[float] = None,
    scale: float = 1.0,
) -> float:
    """Smallest radius (in steps of 1/2) whose lattice tail bound is below tolerance."""
    tolerance = get_tolerances().tail if tolerance is None else tolerance
    radius = 0.5
    while lattice_tail_bound(lattice, kappa, radius, scale) >= tolerance:
        radius += 0.5
        if radius > 1e4:
            raise InsufficientRadiusError("no radius bounds the tail; decay too slow", radius=radius)
    return radius


# ========================================
# Quantum thetas
# ========================================

@dataclass(frozen=True, eq=False)
class QuantumTheta:
    """
    The quantum theta element sum_m c_m pi(m) over the adjoint lattice.

    Attributes:
        coeffs: TwistedSequence over D^!
        T: Gaussian parameter
        D: Lattice of the Gabor system
        truncation_radius: Radius of the retained coefficients (None: finite model)
        tail_bound: Bound on the discarded coefficient mass
    """

    coeffs: TwistedSequence
    T: SiegelMatrix
    D: SeparableLattice
    truncation_radius: Optional[float]
    tail_bound: float = 0.0

    def __post_init__(self):
        c0 = self.coeffs.get(self.coeffs.lattice.zero_key)
        if not (c0.real > 0 and abs(c0.imag) <= 1e-12 * abs(c0.real)):
            raise InvalidModelError(f"theta coefficient at the origin must be real positive, got {c0}")
        peak = max(abs(v) for v in self.coeffs.coeffs.values())
        if peak > c0.real * (1 + 1e-9):
            raise NonDecayingError(f"theta coefficient of modulus {peak:.6g} exceeds c_0 = {c0.real:.6g}")

    @property
    def c0(self) -> float:
        return float(self.coeffs.get(self.coeffs.lattice.zero_key).real)

    def adjoint_residual(self) -> float:
        """Distance between the coefficients and their involution (zero for a self-adjoint element)."""
        return self.coeffs.distance(involution(self.coeffs))


def quantum_theta(
    T: SiegelMatrix,
    D: SeparableLattice,
    radius: Optional[float] = None,
    tolerances: Optional[Tolerances] = None,
) -> QuantumTheta:
    """
    Quantum theta of G(g_T, D): coefficients vol(D)^-1 <g_T, pi(m) g_T> for m in D^!.

    Continuum coefficients use the closed-form ambiguity; the finite model
    uses inner products of the periodized window on every point of D^!.

    Raises:
        InsufficientRadiusError: If the Gaussian tail beyond radius exceeds tolerance
    """
    tolerances = tolerances or get_tolerances()
    _require_decay(T)
    dual = adjoint_lattice(D)
    volume = lattice_volume(D)

    if D.model.is_finite:
        g = gaussian_window(T, D.model)
        keys = dual.keys()
        values = stft_at(g, g, [dual.tf_point(k) for k in keys]) / volume
        coeffs = TwistedSequence(dual, dict(zip(keys, values)))
        return QuantumTheta(coeffs, T, D, None, 0.0)

    kappa = 0.5 * np.pi * float(np.min(linalg.eigvalsh(ambiguity_form(T))))
    c0 = gaussian_ambiguity(T, np.zeros(2 * T.N)).real / volume
    if radius is None:
        radius = default_radius(kappa, dual, tolerances.tail, scale=c0)
    tail = lattice_tail_bound(dual, kappa, radius, scale=c0)
    if tail > tolerances.tail:
        raise InsufficientRadiusError(
            f"theta tail {tail:.3e} above {tolerances.tail:.1e} at radius {radius}", radius=radius, tail_bound=tail
        )

    keys, points = dual.points_within(radius)
    values = parallel_map(lambda p: gaussian_ambiguity(T, p) / volume, list(points))
    coeffs = TwistedSequence(
        dual,
        {tuple(int(k) for k in key): v for key, v in zip(keys, values)},
        truncation_radius=radius,
        tail_bound=tail,
    )
    logger.debug(f"quantum_theta: {len(keys)} coefficients within radius {radius}, tail {tail:.2e}")
    return QuantumTheta(coeffs, T, D, radius, tail)


def theta_twist_residual(theta: QuantumTheta) -> float:
    """max over m of | |c_m| - c_0 e^{-(pi/2) Q(m, m)} | (continuum thetas)."""
    if theta.D.model.is_finite:
        raise UnsupportedModelError("the twisted invariance is exact for continuum Gaussians only")
    Q = ambiguity_form(theta.T)
    worst = 0.0
    for key, value in theta.coeffs.coeffs.items():
        m = theta.coeffs.point(key)
        expected = theta.c0 * math.exp(-0.5 * np.pi * float(m @ Q @ m))
        worst = max(worst, abs(abs(value) - expected))
    return worst


def fit_decay(theta: QuantumTheta) -> float:
    """Gaussian decay rate kappa from a least-squares fit of log|c_m| against |m|^2."""
    radii, logs = [], []
    for key, value in theta.coeffs.coeffs.items():
        if abs(value) > 1e-250:
            radii.append(float(np.sum(theta.coeffs.point(key) ** 2)))
            logs.append(math.log(abs(value)))
    if len(set(radii)) < 2:
        raise InvalidModelError("not enough distinct coefficients to fit a decay rate")
    slope, _ = np.polyfit(radii, logs, 1)
    return float(-slope)


# ========================================
# Theta series
# ========================================

def _series(G: np.ndarray, lattice: SeparableLattice, x: np.ndarray, radius: float) -> complex:
    J = symplectic_matrix(lattice.dimension // 2)
    _, points = lattice.points_within(radius)
    quadratic = np.einsum("ij,jk,ik->i", points, G, points)
    linear = points @ G @ x
    twist = points @ J.T @ x      # sigma(x, h) = x^T J h
    terms = np.exp(-np.pi * quadratic - np.pi * linear - 1j * np.pi * twist)
    ordered = terms[np.argsort(np.abs(terms), kind="stable")]
    return complex(math.fsum(ordered.real), math.fsum(ordered.imag))


def _series_setup(T: SiegelMatrix, D: SeparableLattice, x: PointLike, radius: Optional[float], tolerance: float):
    if D.model.is_finite:
        raise UnsupportedModelError("theta series are continuum lattice sums")
    G, _ = gt_matrix(T)
    if G.shape[0] != D.dimension:
        raise InvalidModelError(f"T is {T.N}x{T.N} but the lattice lives in R^{D.dimension}")
    vector = _as_vector(x, T.N)
    kappa = np.pi * float(np.min(linalg.eigvalsh(G)))
    # |summand| = e^{pi G(x, x)/4} e^{-pi G(h + x/2, h + x/2)}
    scale = math.exp(0.25 * np.pi * float(vector @ G @ vector))
    shift = 0.5 * float(np.linalg.norm(vector))
    if radius is None:
        radius = default_radius(kappa, D, tolerance, scale) + 2.0 * shift
    if np.linalg.norm(vector) >= radius:
        raise InsufficientRadiusError(f"x lies outside the summation radius {radius}", radius=radius)
    tail = lattice_tail_bound(D, kappa, radius - shift, scale)
    if tail > tolerance:
        raise InsufficientRadiusError(f"theta series tail {tail:.3e} above {tolerance:.1e}", radius=radius, tail_bound=tail)
    return G, vector, radius


def theta_series(
    T: SiegelMatrix, D: SeparableLattice, x: PointLike, radius: Optional[float] = None, tolerance: Optional[float] = None
) -> complex:
    """
    sum_{h in D, |h| <= radius} e^{-pi G(h, h) - pi G(x, h) - pi i sigma(x, h)}.

    G = G_T from gt_matrix and sigma(x, h) = x^T J h. The summand is its own
    symplectic Fourier transform, which makes the functional equation a
    Poisson summation.

    Raises:
        InsufficientRadiusError: If x lies outside the radius or the tail bound exceeds tolerance
    """
    tolerance = get_tolerances().tail if tolerance is None else tolerance
    G, vector, radius = _series_setup(T, D, x, radius, tolerance)
    return _series(G, D, vector, radius)


def functional_equation_residual(
    T: SiegelMatrix, D: SeparableLattice, x: PointLike, radius: Optional[float] = None, tolerance: Optional[float] = None
) -> float:
    """| theta_D(x) - vol(D)^-1 theta_{D^!}(x) |."""
    tolerance = get_tolerances().tail if tolerance is None else tolerance
    dual = adjoint_lattice(D)
    G, vector, primal_radius = _series_setup(T, D, x, radius, tolerance)
    _, _, dual_radius = _series_setup(T, dual, vector, radius, tolerance)
    lhs = _series(G, D, vector, primal_radius)
    rhs = _series(G, dual, vector, dual_radius)
    return float(abs(lhs - rhs / lattice_volume(D)))


def theta_report(
    T: SiegelMatrix, D: SeparableLattice, radius: Optional[float] = None, theta: Optional[QuantumTheta] = None
) -> Dict:
    """
    JSON summary of a quantum theta. Continuum lattices add the series value
    and functional-equation residual at x = 0.
    """
    theta = theta or quantum_theta(T, D, radius)
    report = {
        "T": T.describe(),
        "lattice": D.describe(),
        "radius": theta.truncation_radius,
        "tail_bound": theta.tail_bound,
        "coeff_count": len(theta.coeffs.coeffs),
        "c0": theta.c0,
        "adjoint_residual": theta.adjoint_residual(),
        "value_at_0": None,
        "functional_eq_residual": None,
    }
    if D.model.is_finite:
        return report

    origin = np.zeros(2 * T.N)
    report.update(
        value_at_0=_complex_dict(theta_series(T, D, origin, radius)),
        functional_eq_residual=functional_equation_residual(T, D, origin, radius),
        twist_residual=theta_twist_residual(theta),
        decay_rate=fit_decay(theta),
    )
    return report


def _complex_dict(value: complex) -> Dict:
    return {"re": float(value.real), "im": float(value.imag)}


# ========================================
# Invertibility
# ========================================

@dataclass
class ProbeReport:
    """Outcome of one invertibility probe."""

    ab: float
    L: int
    a: int
    b: int
    emulated_ab: float
    A: float
    B: float
    ratio: float
    verdict: str
    tolerances: Dict = field(default_factory=dict)

    @property
    def invertible(self) -> bool:
        return self.verdict == "invertible"

    def to_dict(self) -> Dict:
        return asdict(self)


def _divisors(L: int) -> List[int]:
    return [d for d in range(1, L + 1) if L % d == 0]


def approximate_density(ab: float, L: int, tolerance: float) -> Tuple[int, int]:
    """
    Divisor pair (a', b') of L with a'b'/L within tolerance of ab (relative),
    the most balanced pair first.

    Raises:
        LatticeApproximationError: If no pair qualifies
    """
    if ab <= 0:
        raise LatticeApproximationError(f"density must be positive, got {ab}")
    divisors = _divisors(L)
    candidates = []
    for a in divisors:
        for b in divisors:
            error = abs(a * b / L - ab) / ab
            if error <= tolerance:
                candidates.append((abs(math.log(a) - math.log(b)), error, a, b))
    if not candidates:
        raise LatticeApproximationError(f"no divisor pair of L={L} matches ab={ab} within {tolerance:.0%}")
    _, _, a, b = min(candidates)
    return a, b


def _probe_density(ab: float, L: int, tolerances: Tolerances) -> ProbeReport:
    a, b = approximate_density(ab, L, tolerances.density)
    model = ModelOrder.finite(L)
    window = gaussian_window(SiegelMatrix.scalar(np.pi), model)
    system = GaborSystem(window, SeparableLattice(model, a, b), {"gaussian": np.pi})

    bounds = frame_bounds(system)
    verdict = "invertible" if bounds.ratio > tolerances.invertibility_ratio else "not-invertible"
    logger.info(f"Probe ab={ab:.4g}: L={L} a'={a} b'={b} A/B={bounds.ratio:.3e} -> {verdict}")
    return ProbeReport(
        ab=ab,
        L=L,
        a=a,
        b=b,
        emulated_ab=a * b / L,
        A=bounds.A,
        B=bounds.B,
        ratio=bounds.ratio,
        verdict=verdict,
        tolerances=tolerances.model_dump(),
    )


def invertibility_probe(a: float, b: float, L: int, tolerances: Optional[Tolerances] = None) -> ProbeReport:
    """
    Decide whether the standard Gaussian system over aZ x bZ is a frame,
    emulated on Z_L by a divisor lattice with a'b'/L ~ ab.

    The verdict is "invertible" iff A/B exceeds the invertibility ratio.

    Raises:
        LatticeApproximationError: If no divisor pair of L matches ab within the density tolerance
    """
    if a <= 0 or b <= 0:
        raise LatticeApproximationError(f"lattice steps must be positive, got a={a}, b={b}")
    return _probe_density(a * b, L, tolerances or get_tolerances())


def invertibility_sweep(
    values: Sequence[float],
    L_min: int = 144,
    tolerances: Optional[Tolerances] = None,
    max_search: int = 256,
    window: int = 12,
) -> List[ProbeReport]:
    """
    Probe each density on a model order L >= L_min.

    The search stops at the first L with a divisor pair matching the density,
    then looks at the next `window` orders as well and keeps the most balanced
    pair (smallest |log(a'/b')|, then smallest density error, then smallest L).
    """
    tolerances = tolerances or get_tolerances()

    def choose_order(ab: float) -> int:
        candidates = []
        first = None
        for L in range(L_min, L_min + max_search):
            if first is not None and L >= first + window:
                break
            try:
                a, b = approximate_density(ab, L, tolerances.density)
            except LatticeApproximationError:
                continue
            if first is None:
                first = L
            candidates.append((abs(math.log(a) - math.log(b)), abs(a * b / L - ab) / ab, L))
        if not candidates:
            raise LatticeApproximationError(f"no model order in [{L_min}, {L_min + max_search}) matches ab={ab}")
        return min(candidates)[2]

    def probe(ab: float) -> ProbeReport:
        return _probe_density(ab, choose_order(ab), tolerances)

    return parallel_map(probe, list(values))
