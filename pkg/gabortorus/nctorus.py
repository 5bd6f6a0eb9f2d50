"""
Quantum-torus algebra layer.

Sequences over a lattice with the twisted convolution product form the
twisted group algebra C(D, alpha); the integrated representation sends a
sequence a to the operator pi_D(a) = sum a_h pi(h). Two algebra-valued
Rieffel products turn signals into an equivalence bimodule between the torus
over D (acting on the left) and the opposite torus over the adjoint lattice
D^! (acting on the right).

Conventions (twist = +1, the left algebra):

    (a # b)_h = sum_l a_l b_{h-l} e^{-2 pi i l_x.(h-l)_w}       pi_D(a # b) = pi_D(a) pi_D(b)
    a*_h      = conj(a_{-h}) e^{-2 pi i h_x.h_w}                 pi_D(a*) = pi_D(a)^H

Sequences with twist = -1 carry the conjugate cocycle. They live on D^! and
act on the right through f . b = vol(D)^-1 sum conj(b_m) pi(m) f.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import linalg

from config.settings import get_tolerances

from .errors import (
    CocycleMismatchError,
    InvalidExponentError,
    InvalidLatticeError,
    LatticeMismatchError,
    ModelMismatchError,
    NotInvertibleError,
    UnsupportedModelError,
)
from .phase_space import (
    Key,
    SeparableLattice,
    Signal,
    adjoint_lattice,
    centered,
    lattice_volume,
    shift_matrix,
    tf_shift,
)
from .transforms import stft_at

logger = logging.getLogger(__name__)


# ========================================
# Sequences
# ========================================

@dataclass(frozen=True, eq=False)
class TwistedSequence:
    """
    Finitely supported coefficients {a_h} over a lattice.

    Attributes:
        lattice: Index lattice (keys are integer coordinates in its basis)
        coeffs: Map from canonical key to complex coefficient
        s: Weight order of the ambient algebra
        twist: +1 for C(D, alpha), -1 for the opposite torus acting on the right
        truncation_radius: Radius of the truncated support (continuum), or None
        tail_bound: Estimate of the discarded weighted mass
        certified: False when the tail bound exceeded tolerance
    """

    lattice: SeparableLattice
    coeffs: Dict[Key, complex]
    s: float = 0.0
    twist: int = 1
    truncation_radius: Optional[float] = None
    tail_bound: float = 0.0
    certified: bool = True

    def __post_init__(self):
        if self.twist not in (1, -1):
            raise CocycleMismatchError(f"twist must be +1 or -1, got {self.twist}")
        if self.s < 0:
            raise InvalidExponentError(f"weight order must be nonnegative, got s={self.s}")

        reduced: Dict[Key, complex] = {}
        for key, value in dict(self.coeffs).items():
            if len(key) != self.lattice.dimension:
                raise InvalidLatticeError(f"key {key} does not index a {self.lattice.dimension}-dimensional lattice")
            canonical = self.lattice.reduce_key(key)
            reduced[canonical] = reduced.get(canonical, 0j) + complex(value)
        object.__setattr__(self, "coeffs", reduced)

    @property
    def model(self):
        return self.lattice.model

    def keys(self) -> List[Key]:
        return list(self.coeffs)

    def get(self, key: Key) -> complex:
        return self.coeffs.get(self.lattice.reduce_key(key), 0j)

    def point(self, key: Key) -> np.ndarray:
        return self.lattice.point(key)

    def replace(self, **changes) -> "TwistedSequence":
        return dataclasses.replace(self, **changes)

    def scale(self, factor: complex) -> "TwistedSequence":
        return self.replace(coeffs={k: factor * v for k, v in self.coeffs.items()})

    def __add__(self, other: "TwistedSequence") -> "TwistedSequence":
        _check_compatible(self, other)
        coeffs = dict(self.coeffs)
        for key, value in other.coeffs.items():
            coeffs[key] = coeffs.get(key, 0j) + value
        return self.replace(coeffs=coeffs, tail_bound=self.tail_bound + other.tail_bound)

    def __sub__(self, other: "TwistedSequence") -> "TwistedSequence":
        return self + other.scale(-1.0)

    def distance(self, other: "TwistedSequence") -> float:
        """Largest coefficient-wise difference."""
        _check_compatible(self, other)
        keys = set(self.coeffs) | set(other.coeffs)
        if not keys:
            return 0.0
        return max(abs(self.get(k) - other.get(k)) for k in keys)

    def norm_l1(self) -> float:
        return float(sum(abs(v) for v in self.coeffs.values()))

    def to_dict(self) -> Dict:
        """JSON form: lattice descriptor, weight order and coefficients with their TF points."""
        coeffs = []
        for key in sorted(self.coeffs):
            value = self.coeffs[key]
            coeffs.append({
                "h": [float(c) for c in self.point(key)],
                "key": list(key),
                "re": float(value.real),
                "im": float(value.imag),
            })
        return {
            "lattice": self.lattice.describe(),
            "s": self.s,
            "twist": self.twist,
            "truncation_radius": self.truncation_radius,
            "tail_bound": self.tail_bound,
            "certified": self.certified,
            "coeffs": coeffs,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "TwistedSequence":
        lattice = SeparableLattice.from_descriptor(data["lattice"])
        coeffs: Dict[Key, complex] = {}
        for entry in data.get("coeffs", []):
            key = tuple(entry["key"]) if "key" in entry else lattice.key_of(entry["h"])
            coeffs[key] = complex(entry.get("re", 0.0), entry.get("im", 0.0))
        return cls(
            lattice=lattice,
            coeffs=coeffs,
            s=data.get("s", 0.0),
            twist=data.get("twist", 1),
            truncation_radius=data.get("truncation_radius"),
            tail_bound=data.get("tail_bound", 0.0),
            certified=data.get("certified", True),
        )

    def __repr__(self) -> str:
        return f"<TwistedSequence {self.lattice!r} support={len(self.coeffs)} twist={self.twist:+d}>"


def delta(lattice: SeparableLattice, key: Optional[Key] = None, value: complex = 1.0, twist: int = 1, s: float = 0.0) -> TwistedSequence:
    """value * delta_key (the unit of the algebra for key=0, value=1)."""
    key = lattice.zero_key if key is None else key
    return TwistedSequence(lattice, {tuple(key): value}, s=s, twist=twist)


def _check_compatible(a: TwistedSequence, b: TwistedSequence) -> None:
    if not a.lattice.same_as(b.lattice):
        raise LatticeMismatchError(f"sequences over different lattices: {a.lattice!r} vs {b.lattice!r}")
    if a.twist != b.twist:
        raise CocycleMismatchError("sequences carry different cocycles")


def _multipliers(lattice: SeparableLattice, p: np.ndarray, others: np.ndarray, twist: int) -> np.ndarray:
    """e^{-twist 2 pi i p_x.q_w} for every row q of others (finite: divided by L)."""
    n = lattice.dimension // 2
    if lattice.model.is_finite:
        L = lattice.model.L
        products = (others[:, n:].astype(np.int64) @ p[:n].astype(np.int64)) % L
        return np.exp(-twist * 2j * np.pi * products / L)
    return np.exp(-twist * 2j * np.pi * (others[:, n:] @ p[:n]))


def _arrays(a: TwistedSequence) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    keys = np.array(list(a.coeffs), dtype=int).reshape(-1, a.lattice.dimension)
    points = np.array([a.point(k) for k in a.coeffs]).reshape(-1, a.lattice.dimension)
    values = np.array(list(a.coeffs.values()), dtype=complex)
    return keys, points, values


# ========================================
# Algebra
# ========================================

def twisted_convolution(a: TwistedSequence, b: TwistedSequence) -> TwistedSequence:
    """
    Twisted convolution (a # b)_h = sum_l a_l b_{h-l} conj(alpha(h-l, l)).

    Raises:
        LatticeMismatchError: Different lattices
        CocycleMismatchError: Different twists
    """
    _check_compatible(a, b)
    lattice = a.lattice
    b_keys, b_points, b_values = _arrays(b)

    result: Dict[Key, complex] = {}
    for l, a_l in a.coeffs.items():
        if a_l == 0:
            continue
        phases = _multipliers(lattice, a.point(l), b_points, a.twist)
        for key, value in zip(b_keys + np.array(l), a_l * b_values * phases):
            key = lattice.reduce_key(key)
            result[key] = result.get(key, 0j) + value

    tail = a.tail_bound * b.norm_l1() + b.tail_bound * a.norm_l1() + a.tail_bound * b.tail_bound
    return a.replace(
        coeffs=result,
        truncation_radius=_combined_radius(a, b),
        tail_bound=tail,
        certified=a.certified and b.certified,
    )


def _combined_radius(a: TwistedSequence, b: TwistedSequence) -> Optional[float]:
    if a.truncation_radius is None or b.truncation_radius is None:
        return a.truncation_radius or b.truncation_radius
    return min(a.truncation_radius, b.truncation_radius)


def involution(a: TwistedSequence) -> TwistedSequence:
    """a*_h = conj(alpha(h, h) a_{-h}) (conjugate cocycle for twist -1)."""
    lattice = a.lattice
    result: Dict[Key, complex] = {}
    for key, value in a.coeffs.items():
        mirrored = lattice.reduce_key(tuple(-k for k in key))
        point = lattice.point(mirrored)
        phase = _multipliers(lattice, point, point[None, :], a.twist)[0]
        result[mirrored] = np.conj(value) * phase
    return a.replace(coeffs=result)


def physical_norm(lattice: SeparableLattice, point: np.ndarray) -> float:
    """|h| in physical units (finite residues are centered and scaled by 1/sqrt(L))."""
    if lattice.model.is_finite:
        L = lattice.model.L
        return float(np.linalg.norm(centered(np.asarray(point), L)) / math.sqrt(L))
    return float(np.linalg.norm(point))


def weighted_norm(a: TwistedSequence, s: Optional[float] = None) -> float:
    """
    Weighted l1 norm sum |a_h| (1 + |h|^2)^{s/2}.

    The weight is submultiplicative up to the constant 2^{s/2}, so
    weighted_norm(a # b) <= 2^{s/2} weighted_norm(a) weighted_norm(b).
    """
    s = a.s if s is None else s
    if s < 0:
        raise InvalidExponentError(f"weight order must be nonnegative, got s={s}")
    total = 0.0
    for key, value in a.coeffs.items():
        radius = physical_norm(a.lattice, a.point(key))
        total += abs(value) * (1.0 + radius ** 2) ** (s / 2.0)
    return float(total)


# ========================================
# Representations
# ========================================

def _check_left(a: TwistedSequence, f: Optional[Signal] = None) -> None:
    if a.twist != 1:
        raise CocycleMismatchError("sequences of the opposite torus act on the right; use right_action")
    if f is not None and f.model != a.model:
        raise ModelMismatchError("signal and sequence live in different models")


def integrated_rep(a: TwistedSequence, f: Signal) -> Signal:
    """pi_D(a) f = sum_h a_h pi(h) f."""
    _check_left(a, f)
    values = np.zeros(f.model.size, dtype=complex)
    for key, value in a.coeffs.items():
        values += value * tf_shift(f, a.lattice.tf_point(key), allow_resample=True).values
    return f.with_values(values)


def representation_matrix(a: TwistedSequence) -> np.ndarray:
    """Dense matrix of pi_D(a) (finite model or grid-commensurate continuum lattices)."""
    _check_left(a)
    size = a.model.size
    matrix = np.zeros((size, size), dtype=complex)
    for key, value in a.coeffs.items():
        matrix += value * shift_matrix(a.lattice.tf_point(key), a.model)
    return matrix


def lattice_support(D: SeparableLattice, radius: Optional[float] = None) -> Tuple[List[Key], Optional[float]]:
    """
    Keys of D a sampled signal can see.

    Finite: every point. Continuum: the points within radius (default: the
    largest disc inside the grid's time-frequency box), nearest first.

    Returns:
        (keys, truncation_radius)
    """
    if D.model.is_finite:
        return D.keys(), None
    model = D.model
    box = min(model.extent / 2.0, 1.0 / (2.0 * model.step))
    radius = box if radius is None else min(radius, box)
    keys, _ = D.points_within(radius)
    return [tuple(int(k) for k in key) for key in keys], radius


def _coefficients(f: Signal, g: Signal, D: SeparableLattice, radius: Optional[float]) -> Tuple[Dict[Key, complex], Optional[float]]:
    """<f, pi(h) g> for the keys of D within the support."""
    keys, truncation = lattice_support(D, radius)
    values = stft_at(f, g, [D.tf_point(k) for k in keys])
    return dict(zip(keys, values)), truncation


def rieffel_inner(side: str, f: Signal, g: Signal, D: SeparableLattice, radius: Optional[float] = None) -> TwistedSequence:
    """
    Algebra-valued inner products.

    Args:
        side: "left" gives coefficients <f, pi(h) g> on D (twist +1);
            "right" gives <pi(m) f, g> on D^! (twist -1)
        f, g: Signals in D's model
        D: Lattice of the left torus
        radius: Continuum truncation radius

    Returns:
        TwistedSequence
    """
    if f.model != D.model or g.model != D.model:
        raise ModelMismatchError("signals and lattice live in different models")
    if side == "left":
        coeffs, truncation = _coefficients(f, g, D, radius)
        return TwistedSequence(D, coeffs, twist=1, truncation_radius=truncation)
    if side == "right":
        dual = adjoint_lattice(D)
        coeffs, truncation = _coefficients(g, f, dual, radius)
        conjugated = {k: np.conj(v) for k, v in coeffs.items()}
        return TwistedSequence(dual, conjugated, twist=-1, truncation_radius=truncation)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def right_action(f: Signal, b: TwistedSequence, D: Optional[SeparableLattice] = None) -> Signal:
    """
    f . b = vol(D)^-1 sum_m conj(b_m) pi(m) f, with b over the adjoint lattice.

    Raises:
        CocycleMismatchError: b is not a right (twist -1) sequence
        LatticeMismatchError: b is not indexed by the adjoint of D
    """
    if b.twist != -1:
        raise CocycleMismatchError("right action needs a sequence of the opposite torus (twist -1)")
    if D is not None and not b.lattice.same_as(adjoint_lattice(D)):
        raise LatticeMismatchError(f"{b.lattice!r} is not the adjoint of {D!r}")
    if f.model != b.model:
        raise ModelMismatchError("signal and sequence live in different models")

    # vol(D)^-1 = vol(D^!) in both models
    scale = lattice_volume(b.lattice)
    values = np.zeros(f.model.size, dtype=complex)
    for key, value in b.coeffs.items():
        values += np.conj(value) * tf_shift(f, b.lattice.tf_point(key), allow_resample=True).values
    return f.with_values(scale * values)


# ========================================
# Bimodule identities
# ========================================

def associativity_residual(f: Signal, g: Signal, k: Signal, D: SeparableLattice, radius: Optional[float] = None) -> float:
    """|| _D<f, g> . k - f . <g, k>_{D^!} ||_2."""
    left = integrated_rep(rieffel_inner("left", f, g, D, radius), k)
    right = right_action(f, rieffel_inner("right", g, k, D, radius), D)
    return (left - right).norm()


def bimodule_commutation_residual(a: TwistedSequence, f: Signal, b: TwistedSequence) -> float:
    """|| (a . f) . b - a . (f . b) ||_2."""
    first = right_action(integrated_rep(a, f), b)
    second = integrated_rep(a, right_action(f, b))
    return (first - second).norm()


def bimodule_compatibility_residual(a: TwistedSequence, f: Signal, g: Signal, D: SeparableLattice) -> float:
    """max | <a.f, g>_{D^!} - <f, a*.g>_{D^!} | over the coefficients."""
    lhs = rieffel_inner("right", integrated_rep(a, f), g, D)
    rhs = rieffel_inner("right", f, integrated_rep(involution(a), g), D)
    return lhs.distance(rhs)


def right_compatibility_residual(b: TwistedSequence, f: Signal, g: Signal, D: SeparableLattice) -> float:
    """max | _D<f.b, g> - _D<f, g.b*> | over the coefficients."""
    lhs = rieffel_inner("left", right_action(f, b, D), g, D)
    rhs = rieffel_inner("left", f, right_action(g, involution(b), D), D)
    return lhs.distance(rhs)


# ========================================
# Inversion
# ========================================

def extract_coefficients(matrix: np.ndarray, lattice: SeparableLattice) -> Dict[Key, complex]:
    """Coefficients c_h = tr(M pi(h)^H) / L of an operator in the span of pi(D)."""
    L = lattice.model.L
    coeffs: Dict[Key, complex] = {}
    for key in lattice.keys():
        shift = shift_matrix(lattice.tf_point(key), lattice.model)
        coeffs[key] = complex(np.vdot(shift, matrix) / L)
    return coeffs


def invert_element(a: TwistedSequence, tolerance: Optional[float] = None) -> TwistedSequence:
    """
    Inverse in the algebra, through the inverse of the finite representation.

    Args:
        a: Finite-model sequence of the left torus
        tolerance: Smallest admissible singular value of pi_D(a)

    Returns:
        TwistedSequence b with a # b = delta_0

    Raises:
        UnsupportedModelError: Continuum input (use a finite emulation)
        NotInvertibleError: pi_D(a) is numerically singular
    """
    if not a.model.is_finite:
        raise UnsupportedModelError("invert_element works on finite-model sequences")
    _check_left(a)
    tolerance = get_tolerances().singular_value if tolerance is None else tolerance

    matrix = representation_matrix(a)
    smallest = float(linalg.svdvals(matrix).min())
    logger.debug(f"invert_element: smallest singular value {smallest:.3e}")
    if smallest <= tolerance:
        raise NotInvertibleError(f"smallest singular value {smallest:.3e} <= {tolerance:.1e}")

    inverse = linalg.inv(matrix)
    return a.replace(coeffs=extract_coefficients(inverse, a.lattice), tail_bound=0.0)
