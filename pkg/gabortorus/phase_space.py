"""
Phase-space models, lattices and time-frequency shifts.

Two backends share one interface:

- finite: the cyclic group Z_L. Every duality identity is exact here, so the
  theorems of Gabor analysis become machine-precision checks.
- continuum: a uniform grid symmetric about 0, periodic on its extent. This is
  where Gaussians, quadratures and lattice sums over R^2N live.

Shift convention throughout the package:

    pi(x, w) f(t) = e^{2 pi i t.w} f(t - x)        (modulation after translation)

so that pi(h) pi(k) = e^{-2 pi i h_x.k_w} pi(h + k). The integrated cocycle
alpha(h, k) = e^{2 pi i h_w.k_x} is exposed by cocycle(); the multiplier of the
representation is its conjugate with swapped arguments (see shift_multiplier).
A half-phase pairing psi_A(x, y) = e^{pi i A(x, y)} is never used.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Literal, Optional, Tuple, Union

import numpy as np

from .errors import (
    IncommensurateShiftError,
    InvalidLatticeError,
    InvalidModelError,
    InvalidPhaseError,
    ModelMismatchError,
    UnsupportedLatticeError,
)

logger = logging.getLogger(__name__)

Key = Tuple[int, ...]
Profile = Callable[[np.ndarray], np.ndarray]

_GRID_TOL = 1e-9


def centered(n: Union[int, np.ndarray], L: int) -> Union[int, np.ndarray]:
    """Map residues mod L to the representatives in [-L/2, L/2)."""
    return ((np.asarray(n) + L // 2) % L) - L // 2


def _integer_multiple(value: float, unit: float) -> Optional[int]:
    """Return value/unit if it is an integer (up to rounding), else None."""
    ratio = value / unit
    nearest = round(ratio)
    if abs(ratio - nearest) <= _GRID_TOL * max(1.0, abs(ratio)):
        return int(nearest)
    return None


# ========================================
# Models
# ========================================

@dataclass(frozen=True)
class ModelOrder:
    """
    Phase-space model descriptor.

    Attributes:
        kind: "finite" (Z_L) or "continuum" (sampled R^N)
        L: Order of the cyclic group (finite model)
        N: Dimension of the continuum (signals are N=1; lattice sums allow N=2)
        extent: Total width of the symmetric grid (continuum)
        step: Sampling step (continuum); extent/step must be an even integer
    """

    kind: Literal["finite", "continuum"]
    L: Optional[int] = None
    N: int = 1
    extent: Optional[float] = None
    step: Optional[float] = None

    def __post_init__(self):
        if self.kind == "finite":
            if self.L is None or int(self.L) != self.L or self.L < 2:
                raise InvalidModelError(f"finite model needs an integer L >= 2, got {self.L}")
            object.__setattr__(self, "L", int(self.L))
        elif self.kind == "continuum":
            if self.N not in (1, 2):
                raise InvalidModelError(f"continuum dimension must be 1 or 2, got N={self.N}")
            if self.step is None or self.extent is None or self.step <= 0 or self.extent <= 0:
                raise InvalidModelError("continuum model needs positive extent and step")
            count = _integer_multiple(self.extent, self.step)
            if count is None or count <= 0 or count % 2:
                raise InvalidModelError(
                    f"extent/step must be a positive even integer, got {self.extent / self.step:.6g}"
                )
        else:
            raise InvalidModelError(f"unknown model kind: {self.kind!r}")

    @classmethod
    def finite(cls, L: int) -> "ModelOrder":
        return cls(kind="finite", L=L)

    @classmethod
    def continuum(cls, extent: float = 16.0, step: float = 1.0 / 16, N: int = 1) -> "ModelOrder":
        return cls(kind="continuum", N=N, extent=float(extent), step=float(step))

    @classmethod
    def from_descriptor(cls, descriptor: Dict) -> "ModelOrder":
        """Build a model from its JSON descriptor."""
        kind = descriptor.get("kind")
        if kind == "finite":
            return cls.finite(descriptor.get("L"))
        if kind == "continuum":
            return cls.continuum(
                extent=descriptor.get("extent", 16.0),
                step=descriptor.get("step", 1.0 / 16),
                N=descriptor.get("N", 1),
            )
        raise InvalidModelError(f"unknown model kind: {kind!r}")

    def describe(self) -> Dict:
        if self.is_finite:
            return {"kind": "finite", "L": self.L}
        return {"kind": "continuum", "N": self.N, "extent": self.extent, "step": self.step}

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def size(self) -> int:
        """Number of samples of a signal."""
        if self.is_finite:
            return self.L
        return int(round(self.extent / self.step))

    @property
    def half(self) -> int:
        return self.size // 2

    @property
    def modulus(self) -> Optional[int]:
        """L for the finite model, None for the continuum."""
        return self.L if self.is_finite else None

    @property
    def measure(self) -> float:
        """Weight of one sample in inner products."""
        return 1.0 if self.is_finite else self.step

    @property
    def tf_cell(self) -> float:
        """Measure of one cell of the time-frequency grid."""
        if self.is_finite:
            return 1.0 / self.L
        return self.step / self.extent

    @property
    def frequency_step(self) -> float:
        return 1.0 if self.is_finite else 1.0 / self.extent

    def time_axis(self) -> np.ndarray:
        """TF-grid coordinates along x (residues or grid positions)."""
        if self.is_finite:
            return np.arange(self.L)
        return (np.arange(self.size) - self.half) * self.step

    def frequency_axis(self) -> np.ndarray:
        """TF-grid coordinates along omega."""
        if self.is_finite:
            return np.arange(self.L)
        return (np.arange(self.size) - self.half) / self.extent

    def sample_positions(self) -> np.ndarray:
        """
        Physical positions of the samples.

        Finite residues n are placed at centered(n)/sqrt(L), which makes the
        cyclic group a symmetric sampling of R with equal time and frequency
        resolution.
        """
        if self.is_finite:
            return centered(np.arange(self.L), self.L) / math.sqrt(self.L)
        return self.time_axis()

    def shift_index(self, x: float) -> Optional[int]:
        """Number of samples a translation by x corresponds to, or None."""
        if self.is_finite:
            return _integer_multiple(x, 1.0)
        return _integer_multiple(x, self.step)


# ========================================
# Points and phases
# ========================================

@dataclass(frozen=True)
class TFPoint:
    """
    A time-frequency point (x, omega).

    In the finite model (L set) both coordinates are canonical residues in
    [0, L); use TFPoint.residue to reduce arbitrary integers.
    """

    x: float
    omega: float
    L: Optional[int] = None

    def __post_init__(self):
        if self.L is not None:
            for value in (self.x, self.omega):
                if int(value) != value or not 0 <= value < self.L:
                    raise InvalidModelError(
                        f"finite TF point needs residues in [0, {self.L}), got ({self.x}, {self.omega})"
                    )
            object.__setattr__(self, "x", int(self.x))
            object.__setattr__(self, "omega", int(self.omega))

    @classmethod
    def residue(cls, x: int, omega: int, L: int) -> "TFPoint":
        return cls(int(x) % L, int(omega) % L, L)

    @classmethod
    def on(cls, model: ModelOrder, x: float, omega: float) -> "TFPoint":
        """A point of the given model (finite coordinates are reduced mod L)."""
        if model.is_finite:
            return cls.residue(x, omega, model.L)
        return cls(float(x), float(omega))

    def __add__(self, other: "TFPoint") -> "TFPoint":
        modulus = _common_modulus(self, other)
        if modulus is None:
            return TFPoint(self.x + other.x, self.omega + other.omega)
        return TFPoint.residue(self.x + other.x, self.omega + other.omega, modulus)

    def __neg__(self) -> "TFPoint":
        if self.L is None:
            return TFPoint(-self.x, -self.omega)
        return TFPoint.residue(-self.x, -self.omega, self.L)

    def __sub__(self, other: "TFPoint") -> "TFPoint":
        return self + (-other)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.omega], dtype=float)


@dataclass(frozen=True)
class UnitPhase:
    """A complex number of modulus one (cocycle and commutator values)."""

    value: complex

    def __post_init__(self):
        if abs(abs(self.value) - 1.0) > 1e-12:
            raise InvalidPhaseError(f"|{self.value}| != 1")
        object.__setattr__(self, "value", complex(self.value))

    def __complex__(self) -> complex:
        return self.value

    def conjugate(self) -> "UnitPhase":
        return UnitPhase(self.value.conjugate())


def _common_modulus(h: TFPoint, k: TFPoint) -> Optional[int]:
    if h.L != k.L:
        raise ModelMismatchError(f"points from different models (L={h.L} vs L={k.L})")
    return h.L


def _phase(product: float, modulus: Optional[int]) -> complex:
    """e^{2 pi i product} (continuum) or e^{2 pi i product / L} with exact integer reduction."""
    if modulus is None:
        return complex(np.exp(2j * np.pi * product))
    return complex(np.exp(2j * np.pi * (int(product) % modulus) / modulus))


def cocycle(h: TFPoint, k: TFPoint) -> UnitPhase:
    """alpha(h, k) = e^{2 pi i h_w.k_x} (finite: divided by L)."""
    modulus = _common_modulus(h, k)
    return UnitPhase(_phase(h.omega * k.x, modulus))


def shift_multiplier(h: TFPoint, k: TFPoint) -> UnitPhase:
    """
    Phase c(h, k) with pi(h) pi(k) = c(h, k) pi(h + k).

    For modulation-after-translation shifts c(h, k) = e^{-2 pi i h_x.k_w},
    which equals conj(cocycle(k, h)).
    """
    modulus = _common_modulus(h, k)
    return UnitPhase(_phase(-h.x * k.omega, modulus))


def symplectic_pairing(h: TFPoint, k: TFPoint) -> float:
    """sigma(h, k) = h_x.k_w - k_x.h_w."""
    return h.x * k.omega - k.x * h.omega


def commutator_phase(h: TFPoint, k: TFPoint) -> UnitPhase:
    """epsilon(h, k) with pi(h) pi(k) = epsilon(h, k) pi(k) pi(h)."""
    modulus = _common_modulus(h, k)
    return UnitPhase(_phase(-symplectic_pairing(h, k), modulus))


# ========================================
# Signals
# ========================================

@dataclass(frozen=True, eq=False)
class Signal:
    """
    Samples of a signal on a model.

    Attributes:
        model: Finite or continuum model (continuum signals are N=1)
        values: Complex samples, length model.size
        profile: Optional analytic form t -> f(t), used to evaluate shifts that
            fall between grid points
    """

    model: ModelOrder
    values: np.ndarray
    profile: Optional[Profile] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex).reshape(-1)
        if not self.model.is_finite and self.model.N != 1:
            raise InvalidModelError("signals are supported on one-dimensional grids only")
        if values.shape[0] != self.model.size:
            raise InvalidModelError(f"expected {self.model.size} samples, got {values.shape[0]}")
        object.__setattr__(self, "values", values)

    @staticmethod
    def create(model: ModelOrder, values: np.ndarray, profile: Optional[Profile] = None) -> "Signal":
        """Build the FiniteSignal or GridFunction matching the model."""
        if model.is_finite:
            return FiniteSignal(model, values, profile)
        return GridFunction(model, values, profile)

    @staticmethod
    def sample(model: ModelOrder, profile: Profile) -> "Signal":
        """Sample an analytic function on the model's positions."""
        return Signal.create(model, profile(model.sample_positions()), profile)

    @staticmethod
    def delta(model: ModelOrder, index: int = 0) -> "Signal":
        """Unit impulse at sample index (finite) or at t = 0 scaled to unit L2 norm (continuum)."""
        values = np.zeros(model.size, dtype=complex)
        if model.is_finite:
            values[index % model.size] = 1.0
        else:
            values[(model.half + index) % model.size] = 1.0 / math.sqrt(model.step)
        return Signal.create(model, values)

    def with_values(self, values: np.ndarray, profile: Optional[Profile] = None) -> "Signal":
        return Signal.create(self.model, values, profile)

    def inner(self, other: "Signal") -> complex:
        """<self, other>, linear in the first argument."""
        if other.model != self.model:
            raise ModelMismatchError("inner product of signals from different models")
        return complex(np.vdot(other.values, self.values) * self.model.measure)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.model.measure))

    def reflect(self) -> "Signal":
        """g~(t) = g(-t)."""
        n = self.model.size
        profile = None
        if self.profile is not None:
            base = self.profile
            profile = lambda t: base(-np.asarray(t))
        return self.with_values(self.values[(-np.arange(n)) % n], profile)

    def conj(self) -> "Signal":
        profile = None
        if self.profile is not None:
            base = self.profile
            profile = lambda t: np.conj(base(t))
        return self.with_values(np.conj(self.values), profile)

    def __add__(self, other: "Signal") -> "Signal":
        if other.model != self.model:
            raise ModelMismatchError("sum of signals from different models")
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "Signal") -> "Signal":
        if other.model != self.model:
            raise ModelMismatchError("difference of signals from different models")
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar: complex) -> "Signal":
        profile = None
        if self.profile is not None:
            base = self.profile
            profile = lambda t: scalar * base(t)
        return self.with_values(scalar * self.values, profile)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} {self.model.describe()} norm={self.norm():.6g}>"


class FiniteSignal(Signal):
    """Complex vector of length L: an element of the finite model."""


class GridFunction(Signal):
    """Uniform samples of a function on the symmetric continuum grid."""


def _check_point(model: ModelOrder, p: TFPoint) -> None:
    if model.modulus != p.L:
        raise ModelMismatchError(f"point with L={p.L} used on model {model.describe()}")


def tf_shift(f: Signal, p: TFPoint, allow_resample: bool = False) -> Signal:
    """
    Apply pi(p) f (t) = e^{2 pi i t.w} f(t - x).

    Args:
        f: Signal
        p: TF point of the same model
        allow_resample: For continuum shifts off the grid, evaluate the
            signal's analytic profile instead of failing

    Returns:
        Shifted signal (unitary: same L2 norm for grid shifts)

    Raises:
        IncommensurateShiftError: If x is not a multiple of the step and no
            profile may be used
    """
    model = f.model
    _check_point(model, p)
    positions = model.time_axis()

    if model.is_finite:
        modulation = np.exp(2j * np.pi * ((positions * p.omega) % model.L) / model.L)
        return f.with_values(modulation * np.roll(f.values, p.x))

    modulation = np.exp(2j * np.pi * positions * p.omega)
    shift = model.shift_index(p.x)
    profile = None
    if f.profile is not None:
        base, x, w = f.profile, p.x, p.omega
        profile = lambda t: np.exp(2j * np.pi * np.asarray(t) * w) * base(np.asarray(t) - x)

    if shift is not None:
        return f.with_values(modulation * np.roll(f.values, shift), profile)
    if allow_resample and f.profile is not None:
        return f.with_values(profile(positions), profile)
    raise IncommensurateShiftError(f"shift x={p.x} is not a multiple of step={model.step}")


def shift_matrix(p: TFPoint, model: ModelOrder) -> np.ndarray:
    """Dense matrix of pi(p) acting on sample vectors."""
    _check_point(model, p)
    n = model.size
    columns = np.arange(n)
    shift = p.x if model.is_finite else model.shift_index(p.x)
    if shift is None:
        raise IncommensurateShiftError(f"shift x={p.x} is not a multiple of step={model.step}")

    rows = (columns + shift) % n
    if model.is_finite:
        phases = np.exp(2j * np.pi * ((rows * p.omega) % model.L) / model.L)
    else:
        phases = np.exp(2j * np.pi * model.time_axis()[rows] * p.omega)

    matrix = np.zeros((n, n), dtype=complex)
    matrix[rows, columns] = phases
    return matrix


# ========================================
# Lattices
# ========================================

@dataclass(frozen=True, eq=False)
class SeparableLattice:
    """
    A time-frequency lattice D.

    Separable lattices are a Z^N x b Z^N (continuum) or a Z_L x b Z_L with
    a | L and b | L (finite). Continuum lattices may instead be given by an
    invertible 2N x 2N generator matrix (columns span the lattice); those are
    used for theta lattice sums only.
    """

    model: ModelOrder
    a: float = 1.0
    b: float = 1.0
    generator: Optional[Tuple[Tuple[float, ...], ...]] = None

    def __post_init__(self):
        if self.generator is not None:
            if self.model.is_finite:
                raise UnsupportedLatticeError("generator lattices are not supported in the finite model")
            matrix = np.asarray(self.generator, dtype=float)
            dim = 2 * self.model.N
            if matrix.shape != (dim, dim):
                raise InvalidLatticeError(f"generator must be {dim}x{dim}, got {matrix.shape}")
            if abs(np.linalg.det(matrix)) < 1e-12:
                raise InvalidLatticeError("generator matrix is singular")
            object.__setattr__(self, "generator", tuple(tuple(float(v) for v in row) for row in matrix))
            return

        if self.model.is_finite:
            L = self.model.L
            for name, step in (("a", self.a), ("b", self.b)):
                if int(step) != step or step < 1 or L % int(step):
                    raise InvalidLatticeError(f"{name}={step} does not divide L={L}")
            object.__setattr__(self, "a", int(self.a))
            object.__setattr__(self, "b", int(self.b))
        elif self.a <= 0 or self.b <= 0:
            raise InvalidLatticeError(f"lattice steps must be positive, got a={self.a}, b={self.b}")

    @classmethod
    def from_generator(cls, model: ModelOrder, matrix: np.ndarray) -> "SeparableLattice":
        return cls(model=model, generator=tuple(map(tuple, np.asarray(matrix, dtype=float))))

    @classmethod
    def from_descriptor(cls, descriptor: Dict, model: Optional[ModelOrder] = None) -> "SeparableLattice":
        """
        Build a lattice from {"a":..., "b":...} or {"generator": [[...]]}.

        The model comes from the descriptor's "model" entry unless given.
        """
        if model is None:
            if "model" not in descriptor:
                raise InvalidLatticeError("lattice descriptor without a model")
            model = ModelOrder.from_descriptor(descriptor["model"])
        if "generator" in descriptor:
            return cls.from_generator(model, np.asarray(descriptor["generator"], dtype=float))
        try:
            return cls(model=model, a=descriptor["a"], b=descriptor["b"])
        except KeyError as e:
            raise InvalidLatticeError(f"lattice descriptor is missing {e}")

    @property
    def is_separable(self) -> bool:
        return self.generator is None

    @property
    def dimension(self) -> int:
        return 2 if self.model.is_finite else 2 * self.model.N

    @property
    def basis(self) -> np.ndarray:
        """Generator matrix (columns are basis vectors)."""
        if self.generator is not None:
            return np.asarray(self.generator, dtype=float)
        n = self.dimension // 2
        return np.diag([float(self.a)] * n + [float(self.b)] * n)

    @property
    def counts(self) -> Tuple[int, int]:
        """Number of distinct time and frequency positions (finite model)."""
        if not self.model.is_finite:
            raise UnsupportedLatticeError("a continuum lattice is infinite")
        return self.model.L // self.a, self.model.L // self.b

    @property
    def redundancy(self) -> float:
        return 1.0 / lattice_volume(self)

    @property
    def zero_key(self) -> Key:
        return (0,) * self.dimension

    def reduce_key(self, key: Key) -> Key:
        """Canonical representative of a coefficient key."""
        key = tuple(int(k) for k in key)
        if self.model.is_finite:
            n_x, n_w = self.counts
            return (key[0] % n_x, key[1] % n_w)
        return key

    def point(self, key: Key) -> np.ndarray:
        """Coordinates of the lattice point with integer key."""
        if self.model.is_finite:
            j, k = self.reduce_key(key)
            return np.array([j * self.a, k * self.b], dtype=int)
        return self.basis @ np.asarray(key, dtype=float)

    def key_of(self, point: np.ndarray) -> Key:
        """Integer key of a lattice point given by its coordinates."""
        point = np.asarray(point, dtype=float)
        if self.model.is_finite:
            if point[0] % self.a or point[1] % self.b:
                raise InvalidLatticeError(f"{point.tolist()} is not a point of {self!r}")
            return self.reduce_key((int(point[0]) // self.a, int(point[1]) // self.b))
        key = np.linalg.solve(self.basis, point)
        if not np.allclose(key, np.round(key), atol=1e-9):
            raise InvalidLatticeError(f"{point.tolist()} is not a point of {self!r}")
        return tuple(int(k) for k in np.round(key))

    def tf_point(self, key: Key) -> TFPoint:
        """The lattice point as a TFPoint (two-dimensional phase space only)."""
        if self.dimension != 2:
            raise UnsupportedLatticeError("TFPoint views exist for N=1 only")
        x, w = self.point(key)
        return TFPoint.on(self.model, x, w)

    def keys(self):
        """All keys of a finite lattice in canonical order."""
        n_x, n_w = self.counts
        return [(j, k) for j in range(n_x) for k in range(n_w)]

    def points_within(self, radius: float, center: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
        """
        Keys and coordinates of the lattice points within a radius.

        Points are ordered by distance to the center (ties broken
        lexicographically) so reductions over them are deterministic.

        Returns:
            (keys, points) as integer (n, 2N) and float (n, 2N) arrays; the
            finite model always returns every point
        """
        if self.model.is_finite:
            keys = np.array(self.keys(), dtype=int)
            points = np.array([self.point(k) for k in keys], dtype=float)
            return keys, points

        basis = self.basis
        dim = self.dimension
        center = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
        bound = np.linalg.norm(np.linalg.inv(basis), 2) * (radius + np.linalg.norm(center))
        span = int(math.ceil(bound)) + 1
        axes = [np.arange(-span, span + 1)] * dim
        keys = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
        points = keys @ basis.T
        distance = np.linalg.norm(points - center, axis=1)
        inside = distance <= radius + 1e-12
        keys, points, distance = keys[inside], points[inside], distance[inside]
        order = np.lexsort(tuple(keys[:, i] for i in reversed(range(dim))) + (np.round(distance, 12),))
        return keys[order], points[order]

    def same_as(self, other: "SeparableLattice") -> bool:
        """Whether both describe the same set of points."""
        if other.model != self.model:
            return False
        if self.model.is_finite:
            return (self.a, self.b) == (other.a, other.b)
        change = np.linalg.solve(self.basis, other.basis)
        return bool(
            np.allclose(change, np.round(change), atol=1e-9)
            and abs(abs(np.linalg.det(np.round(change))) - 1.0) < 1e-9
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, SeparableLattice) and self.same_as(other)

    def __hash__(self) -> int:
        return hash((self.model, round(lattice_volume(self), 9)))

    def describe(self) -> Dict:
        if self.generator is not None:
            return {"model": self.model.describe(), "generator": [list(row) for row in self.generator]}
        return {"model": self.model.describe(), "a": self.a, "b": self.b}

    def __repr__(self) -> str:
        if self.generator is not None:
            return f"<SeparableLattice generator vol={lattice_volume(self):.6g}>"
        return f"<SeparableLattice a={self.a} b={self.b} {self.model.kind}>"


def symplectic_matrix(N: int) -> np.ndarray:
    """J = [[0, I], [-I, 0]], so that sigma(h, k) = h^T J k."""
    identity = np.eye(N)
    zero = np.zeros((N, N))
    return np.block([[zero, identity], [-identity, zero]])


def adjoint_lattice(D: SeparableLattice) -> SeparableLattice:
    """
    Adjoint lattice: all points whose shifts commute with every pi(h), h in D.

    Continuum a Z x b Z -> (1/b) Z x (1/a) Z; finite a Z_L x b Z_L ->
    (L/b) Z_L x (L/a) Z_L; a continuum generator M -> J^T M^{-T}.

    Raises:
        UnsupportedLatticeError: For finite non-separable lattices
    """
    model = D.model
    if D.is_separable:
        if model.is_finite:
            return SeparableLattice(model, a=model.L // D.b, b=model.L // D.a)
        return SeparableLattice(model, a=1.0 / D.b, b=1.0 / D.a)

    if model.is_finite:
        raise UnsupportedLatticeError("finite non-separable lattices have no adjoint implementation")
    J = symplectic_matrix(model.N)
    return SeparableLattice.from_generator(model, J.T @ np.linalg.inv(D.basis).T)


def lattice_volume(D: SeparableLattice) -> float:
    """
    Volume of a fundamental domain.

    Continuum: (ab)^N or |det generator|. Finite: ab/L, the normalization
    under which the Janssen representation holds exactly.
    """
    if D.model.is_finite:
        return D.a * D.b / D.model.L
    if D.is_separable:
        return float((D.a * D.b) ** D.model.N)
    return float(abs(np.linalg.det(D.basis)))


def lattice_points(D: SeparableLattice) -> Tuple[np.ndarray, np.ndarray]:
    """Keys and coordinates of every point of a finite lattice."""
    if not D.model.is_finite:
        raise UnsupportedLatticeError("a continuum lattice has infinitely many points; use lattice_points_within")
    return D.points_within(0.0)


def lattice_points_within(
    D: SeparableLattice, radius: float, center: Optional[np.ndarray] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Keys and coordinates of the lattice points within radius of center, nearest first."""
    return D.points_within(radius, center)
