"""
Gabor systems over lattices.

Analysis, synthesis and frame operators of G(g, D) = {pi(h) g : h in D},
frame bounds from a dense Hermitian eigensolve, canonical dual and tight
windows, the Janssen representation over the adjoint lattice and residuals
for the duality identities (FIGA, symplectic Poisson summation,
Wexler-Raz biorthogonality).

Normalizations: vol(D) = ab/L in the finite model, so that

    S_{g,h,D} = vol(D)^-1 sum_{m in D^!} <g, pi(m) h> pi(m)

holds exactly on Z_L and as a convergent series in the continuum.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import linalg

from config.settings import Tolerances, get_tolerances

from .errors import (
    ConvergenceNotCertifiedError,
    DegenerateWindowError,
    LatticeMismatchError,
    ModelMismatchError,
    NotAFrameError,
    NumericalError,
    UnsupportedLatticeError,
    UnsupportedModelError,
)
from .nctorus import (
    TwistedSequence,
    integrated_rep,
    lattice_support,
    physical_norm,
    representation_matrix,
    rieffel_inner,
)
from .parallel import parallel_map
from .phase_space import Key, SeparableLattice, Signal, adjoint_lattice, lattice_volume, tf_shift
from .transforms import TFMatrix, WeightSpec, _check_exponents, _mixed_norm, stft, stft_at, symplectic_fourier

logger = logging.getLogger(__name__)


# ========================================
# Types
# ========================================

@dataclass(frozen=True, eq=False)
class GaborSystem:
    """
    The Gabor system G(atom, lattice).

    Attributes:
        atom: Window g (nonzero, same model as the lattice)
        lattice: Separable lattice D
        atom_descriptor: How the atom was built, echoed in reports
        radius: Continuum truncation radius for lattice sums (None: grid box)
    """

    atom: Signal
    lattice: SeparableLattice
    atom_descriptor: Dict = field(default_factory=lambda: {"kind": "custom"})
    radius: Optional[float] = None

    def __post_init__(self):
        if self.atom.model != self.lattice.model:
            raise ModelMismatchError("atom and lattice live in different models")
        if not self.lattice.is_separable:
            raise UnsupportedLatticeError("Gabor systems are built over separable lattices")
        if not np.any(np.abs(self.atom.values) > 0):
            raise DegenerateWindowError("Gabor atom is identically zero")

    @property
    def model(self):
        return self.lattice.model

    def with_atom(self, atom: Signal) -> "GaborSystem":
        return GaborSystem(atom, self.lattice, {"kind": "derived"}, self.radius)


@dataclass(frozen=True)
class FrameBounds:
    """Optimal frame bounds 0 <= A <= B."""

    A: float
    B: float

    @property
    def ratio(self) -> float:
        return self.A / self.B if self.B > 0 else 0.0

    def is_frame(self, frame_ratio: float) -> bool:
        return self.A > frame_ratio * self.B


@dataclass
class FrameReport:
    """Summary of a Gabor system, serialized by framecheck."""

    lattice: Dict
    atom_descriptor: Dict
    A: float
    B: float
    redundancy: float
    is_frame: bool
    janssen_tail: float
    truncation_radius: Optional[float]
    janssen_residual: Optional[float] = None
    tolerances: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return asdict(self)


# ========================================
# Operators
# ========================================

def analysis(sys: GaborSystem, f: Signal) -> TwistedSequence:
    """Coefficients c_h = <f, pi(h) g> for h in D (continuum: truncated, radius recorded)."""
    return rieffel_inner("left", f, sys.atom, sys.lattice, sys.radius)


def synthesis(sys: GaborSystem, c: TwistedSequence) -> Signal:
    """sum_h c_h pi(h) g."""
    if not c.lattice.same_as(sys.lattice):
        raise LatticeMismatchError(f"coefficients over {c.lattice!r}, system over {sys.lattice!r}")
    return integrated_rep(c, sys.atom)


def frame_operator(sys: GaborSystem, f: Signal) -> Signal:
    """S_{g,D} f = synthesis(analysis(f))."""
    return synthesis(sys, analysis(sys, f))


def frame_type_operator(sys: GaborSystem, h_atom: Signal, f: Signal) -> Signal:
    """S_{g,h,D} f = sum <f, pi(l) h> pi(l) g."""
    coefficients = rieffel_inner("left", f, h_atom, sys.lattice, sys.radius)
    return synthesis(sys, coefficients)


def _shifted_atoms(atom: Signal, keys: List[Key], lattice: SeparableLattice) -> np.ndarray:
    """Matrix whose columns are pi(h) atom for the given keys."""
    columns = parallel_map(lambda key: tf_shift(atom, lattice.tf_point(key), allow_resample=True).values, keys)
    return np.stack(columns, axis=1)


def frame_operator_matrix(sys: GaborSystem, h_atom: Optional[Signal] = None) -> np.ndarray:
    """
    Dense matrix of S_{g,h,D} acting on sample vectors (h defaults to g).

    S = measure * V_g V_h^H, where the columns of V_g are the shifted atoms.
    """
    keys, _ = lattice_support(sys.lattice, sys.radius)
    analysis_atoms = _shifted_atoms(sys.atom, keys, sys.lattice)
    if h_atom is None:
        dual_atoms = analysis_atoms
    else:
        if h_atom.model != sys.model:
            raise ModelMismatchError("second atom lives in a different model")
        dual_atoms = _shifted_atoms(h_atom, keys, sys.lattice)
    return sys.model.measure * analysis_atoms @ dual_atoms.conj().T


def _hermitian_spectrum(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    try:
        return linalg.eigh(matrix)
    except linalg.LinAlgError as e:
        condition = float(np.linalg.cond(matrix)) if np.all(np.isfinite(matrix)) else None
        raise NumericalError(f"eigensolve of the frame operator failed: {e}", condition=condition)


def frame_bounds(sys: GaborSystem) -> FrameBounds:
    """
    Optimal frame bounds: extreme eigenvalues of the frame operator.

    Raises:
        NumericalError: If the eigensolver fails
    """
    eigenvalues, _ = _hermitian_spectrum(frame_operator_matrix(sys))
    bounds = FrameBounds(A=max(float(eigenvalues[0]), 0.0), B=float(eigenvalues[-1]))
    logger.debug(f"frame_bounds: A={bounds.A:.6g} B={bounds.B:.6g} for {sys.lattice!r}")
    return bounds


def dual_window(sys: GaborSystem, mode: str = "dual", tolerances: Optional[Tolerances] = None) -> Signal:
    """
    Canonical dual S^-1 g (mode="dual") or canonical tight window S^-1/2 g (mode="tight").

    Raises:
        UnsupportedModelError: Continuum systems
        NotAFrameError: A <= frame_ratio * B
    """
    if not sys.model.is_finite:
        raise UnsupportedModelError("dual windows are computed in the finite model")
    if mode not in ("dual", "tight"):
        raise ValueError(f"mode must be 'dual' or 'tight', got {mode!r}")
    tolerances = tolerances or get_tolerances()

    eigenvalues, vectors = _hermitian_spectrum(frame_operator_matrix(sys))
    A, B = float(eigenvalues[0]), float(eigenvalues[-1])
    if not A > tolerances.frame_ratio * B:
        raise NotAFrameError(f"lower frame bound {A:.3e} vanishes relative to B={B:.3e}")

    power = -1.0 if mode == "dual" else -0.5
    transform = (vectors * eigenvalues ** power) @ vectors.conj().T
    return sys.atom.with_values(transform @ sys.atom.values)


# ========================================
# Janssen representation
# ========================================

def _shell_tail(sequence: Dict[Key, complex], lattice: SeparableLattice, radius: Optional[float]) -> float:
    """Mass on the outermost shell of a truncated sum, the tail estimate of the truncation."""
    if radius is None or not sequence:
        return 0.0
    width = max(lattice.basis.diagonal()) if lattice.is_separable else float(np.linalg.norm(lattice.basis, 2))
    return float(sum(
        abs(value) for key, value in sequence.items()
        if np.linalg.norm(lattice.point(key)) > radius - width
    ))


def janssen_operator(
    sys: GaborSystem,
    h_atom: Optional[Signal] = None,
    strict: bool = False,
    tolerances: Optional[Tolerances] = None,
) -> TwistedSequence:
    """
    Janssen coefficients vol(D)^-1 <g, pi(m) h> over the adjoint lattice.

    The returned sequence integrates (integrated_rep) to S_{g,h,D}. In the
    continuum the sum is truncated at the system's radius and its outer shell
    bounds the tail.

    Args:
        sys: Gabor system G(g, D)
        h_atom: Second atom (defaults to g)
        strict: Raise instead of returning an uncertified result

    Raises:
        ConvergenceNotCertifiedError: strict and the tail exceeds tolerance
    """
    tolerances = tolerances or get_tolerances()
    h_atom = sys.atom if h_atom is None else h_atom
    dual = adjoint_lattice(sys.lattice)
    volume = lattice_volume(sys.lattice)

    keys, truncation = lattice_support(dual, sys.radius)
    values = stft_at(sys.atom, h_atom, [dual.tf_point(k) for k in keys]) / volume
    coeffs = dict(zip(keys, values))

    tail = _shell_tail(coeffs, dual, truncation)
    certified = tail <= tolerances.tail
    result = TwistedSequence(dual, coeffs, twist=1, truncation_radius=truncation, tail_bound=tail, certified=certified)

    if not certified:
        message = f"Janssen tail {tail:.3e} above {tolerances.tail:.1e} at radius {truncation}"
        if strict:
            raise ConvergenceNotCertifiedError(message, result=result, tail_bound=tail)
        logger.warning(message)
    return result


def janssen_residual(sys: GaborSystem, h_atom: Optional[Signal] = None) -> float:
    """Frobenius distance between the direct and the Janssen-side frame operators (finite model)."""
    if not sys.model.is_finite:
        raise UnsupportedModelError("dense Janssen comparison runs in the finite model")
    direct = frame_operator_matrix(sys, h_atom)
    janssen = representation_matrix(janssen_operator(sys, h_atom))
    return float(np.linalg.norm(direct - janssen))


# ========================================
# Duality identities
# ========================================

def _stable_sum(values: np.ndarray) -> complex:
    """Order-independent sum (smallest magnitudes first, compensated)."""
    values = np.asarray(values, dtype=complex)
    ordered = values[np.argsort(np.abs(values), kind="stable")]
    return complex(math.fsum(ordered.real), math.fsum(ordered.imag))


def _lattice_stft(f: Signal, g: Signal, lattice: SeparableLattice, radius: Optional[float]) -> np.ndarray:
    """V_g f at the points of the lattice that the model can see."""
    keys, _ = lattice_support(lattice, radius)
    if lattice.model.is_finite:
        V = stft(f, g).values
        points = np.array([lattice.point(k) for k in keys], dtype=int)
        return V[points[:, 0], points[:, 1]]
    return stft_at(f, g, [lattice.tf_point(k) for k in keys])


def figa_residual(
    f1: Signal, f2: Signal, g1: Signal, g2: Signal, D: SeparableLattice, radius: Optional[float] = None
) -> float:
    """
    Residual of the fundamental identity of Gabor analysis:

        sum_D V_{g1}f1 conj(V_{g2}f2) = vol(D)^-1 sum_{D^!} V_{g1}g2 conj(V_{f1}f2)
    """
    for signal in (f1, f2, g1, g2):
        if signal.model != D.model:
            raise ModelMismatchError("signals and lattice live in different models")
    dual = adjoint_lattice(D)
    lhs = _stable_sum(_lattice_stft(f1, g1, D, radius) * np.conj(_lattice_stft(f2, g2, D, radius)))
    rhs = _stable_sum(_lattice_stft(g2, g1, dual, radius) * np.conj(_lattice_stft(f2, f1, dual, radius)))
    return float(abs(lhs - rhs / lattice_volume(D)))


def _grid_sum(F: TFMatrix, lattice: SeparableLattice) -> complex:
    """Sum of F over the lattice points inside its grid (continuum points must be grid points)."""
    if lattice.model.is_finite:
        points = np.array([lattice.point(k) for k in lattice.keys()], dtype=int)
        return _stable_sum(F.values[points[:, 0], points[:, 1]])

    x_low, x_high = F.x_axis[0], F.x_axis[-1]
    w_low, w_high = F.omega_axis[0], F.omega_axis[-1]
    reach = math.hypot(max(abs(x_low), abs(x_high)), max(abs(w_low), abs(w_high)))
    _, points = lattice.points_within(reach)
    inside = (
        (points[:, 0] >= x_low - 1e-12) & (points[:, 0] <= x_high + 1e-12)
        & (points[:, 1] >= w_low - 1e-12) & (points[:, 1] <= w_high + 1e-12)
    )
    return _stable_sum([F.value_at(x, w) for x, w in points[inside]])


def poisson_residual(F: TFMatrix, D: SeparableLattice) -> float:
    """
    Residual of symplectic Poisson summation:

        | sum_D F - vol(D)^-1 sum_{D^!} F_s F |

    Raises:
        IncommensurateShiftError: Continuum lattice points off the TF grid
    """
    if F.model != D.model:
        raise ModelMismatchError("TF matrix and lattice live in different models")
    lhs = _grid_sum(F, D)
    rhs = _grid_sum(symplectic_fourier(F), adjoint_lattice(D))
    return float(abs(lhs - rhs / lattice_volume(D)))


def wexler_raz_residual(sys: GaborSystem, gamma: Signal) -> float:
    """max over m in D^! of |<gamma, pi(m) g> - vol(D) delta_{m,0}|."""
    dual = adjoint_lattice(sys.lattice)
    keys, _ = lattice_support(dual, sys.radius)
    values = stft_at(gamma, sys.atom, [dual.tf_point(k) for k in keys])
    expected = np.array([lattice_volume(sys.lattice) if not any(k) else 0.0 for k in keys])
    return float(np.max(np.abs(values - expected)))


def gabor_coefficient_norm(
    sys: GaborSystem, f: Signal, p: float = 2.0, q: float = 2.0, weight: Optional[WeightSpec] = None
) -> float:
    """
    Mixed l^{p,q} norm of the Gabor coefficients (l^p over time positions,
    then l^q over frequency positions), optionally weighted by v_s.
    """
    _check_exponents(p, q)
    weight = weight or WeightSpec(0.0)
    coefficients = analysis(sys, f)

    keys = np.array(list(coefficients.coeffs), dtype=int)
    offset = keys.min(axis=0)
    grid = np.zeros(tuple(keys.max(axis=0) - offset + 1))
    for key, value in coefficients.coeffs.items():
        point = sys.lattice.point(key)
        radius = physical_norm(sys.lattice, point)
        grid[tuple(np.array(key) - offset)] = abs(value) * (1.0 + radius ** 2) ** (weight.s / 2.0)
    return _mixed_norm(grid, p, q, 1.0, 1.0)


def frame_report(sys: GaborSystem, tolerances: Optional[Tolerances] = None) -> FrameReport:
    """Frame bounds, redundancy, Janssen tail and (finite) Janssen residual of a system."""
    tolerances = tolerances or get_tolerances()
    bounds = frame_bounds(sys)
    janssen = janssen_operator(sys, tolerances=tolerances)
    residual = janssen_residual(sys) if sys.model.is_finite else None

    report = FrameReport(
        lattice=sys.lattice.describe(),
        atom_descriptor=sys.atom_descriptor,
        A=bounds.A,
        B=bounds.B,
        redundancy=sys.lattice.redundancy,
        is_frame=bounds.is_frame(tolerances.frame_ratio),
        janssen_tail=janssen.tail_bound,
        truncation_radius=janssen.truncation_radius,
        janssen_residual=residual,
        tolerances=tolerances.model_dump(),
    )
    logger.info(f"Frame report: A={report.A:.4g} B={report.B:.4g} is_frame={report.is_frame}")
    return report
