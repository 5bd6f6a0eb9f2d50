"""
Time-frequency transforms.

DFT, short-time Fourier transform, cross-Wigner distribution and the
symplectic Fourier transform, together with residuals for the Moyal and
Fourier-rotation identities and a mixed-norm modulation-space estimator.

Conventions:
- V_g f(x, w) = <f, pi(x, w) g>, computed for all grid points at once with
  one FFT per time shift.
- Finite DFT is unitary (norm="ortho"). The continuum DFT is the centered
  Riemann sum step * sum f(t) e^{-2 pi i t w} on the grid w_j = (j - M)/extent,
  which is unitary between the grids (extent, step) and (1/step, 1/extent).
- Grid measures: finite 1/L per TF point, continuum step/extent.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import fft as sfft

from .errors import (
    DegenerateWindowError,
    IncommensurateShiftError,
    InvalidExponentError,
    InvalidModelError,
    ModelMismatchError,
    UnsupportedModelError,
)
from .parallel import parallel_map
from .phase_space import ModelOrder, Signal, TFPoint, centered, tf_shift

logger = logging.getLogger(__name__)


# ========================================
# Types
# ========================================

@dataclass(frozen=True, eq=False)
class TFMatrix:
    """
    Complex values on a time-frequency grid.

    values[i, j] is the value at (x_axis[i], omega_axis[j]); measure is the
    area of one grid cell, so sum(values) * measure is a Riemann sum.
    """

    model: ModelOrder
    values: np.ndarray
    x_axis: np.ndarray
    omega_axis: np.ndarray
    measure: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (len(self.x_axis), len(self.omega_axis)):
            raise InvalidModelError(
                f"TF values of shape {values.shape} do not match axes "
                f"({len(self.x_axis)}, {len(self.omega_axis)})"
            )
        object.__setattr__(self, "values", values)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    @property
    def is_square(self) -> bool:
        return self.shape[0] == self.shape[1]

    def _axis_index(self, axis: np.ndarray, value: float) -> int:
        if self.model.is_finite and axis.dtype.kind == "i":
            return int(round(value)) % len(axis)
        spacing = axis[1] - axis[0]
        position = (value - axis[0]) / spacing
        index = int(round(position))
        if abs(position - index) > 1e-9 * max(1.0, abs(position)) or not 0 <= index < len(axis):
            raise IncommensurateShiftError(f"{value} is not a grid coordinate of this TF matrix")
        return index

    def contains(self, x: float, omega: float) -> bool:
        try:
            self.index_of(x, omega)
        except IncommensurateShiftError:
            return False
        return True

    def index_of(self, x: float, omega: float) -> Tuple[int, int]:
        return self._axis_index(self.x_axis, x), self._axis_index(self.omega_axis, omega)

    def value_at(self, x: float, omega: float) -> complex:
        i, j = self.index_of(x, omega)
        return complex(self.values[i, j])

    def with_values(self, values: np.ndarray) -> "TFMatrix":
        return TFMatrix(self.model, values, self.x_axis, self.omega_axis, self.measure)

    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    def conj(self) -> "TFMatrix":
        return self.with_values(np.conj(self.values))

    def __mul__(self, other: Union["TFMatrix", complex]) -> "TFMatrix":
        if isinstance(other, TFMatrix):
            if other.shape != self.shape:
                raise ModelMismatchError("pointwise product of TF matrices on different grids")
            return self.with_values(self.values * other.values)
        return self.with_values(self.values * other)

    __rmul__ = __mul__

    def total(self) -> complex:
        """Riemann sum of the values over the grid."""
        return complex(np.sum(self.values) * self.measure)


@dataclass(frozen=True)
class WeightSpec:
    """Polynomial weight v_s(x, w) = (1 + |x|^2 + |w|^2)^{s/2}."""

    s: float = 0.0

    def __post_init__(self):
        if self.s < 0:
            raise InvalidExponentError(f"weight order must be nonnegative, got s={self.s}")

    def evaluate(self, x: np.ndarray, omega: np.ndarray) -> np.ndarray:
        return (1.0 + np.asarray(x) ** 2 + np.asarray(omega) ** 2) ** (self.s / 2.0)


# ========================================
# Helpers
# ========================================

def _same_model(*signals: Signal) -> ModelOrder:
    model = signals[0].model
    for other in signals[1:]:
        if other.model != model:
            raise ModelMismatchError(f"signals from different models: {model.describe()} vs {other.model.describe()}")
    return model


def _check_window(g: Signal) -> None:
    if not np.any(np.abs(g.values) > 0):
        raise DegenerateWindowError("window is identically zero")


def centered_fft(values: np.ndarray, axis: int = -1) -> np.ndarray:
    """sum_n v[n] e^{-2 pi i (n - M)(j - M)/2M} along axis (length 2M)."""
    shifted = sfft.ifftshift(values, axes=axis)
    return sfft.fftshift(sfft.fft(shifted, axis=axis), axes=axis)


def centered_ifft(values: np.ndarray, axis: int = -1) -> np.ndarray:
    """Inverse of centered_fft."""
    shifted = sfft.ifftshift(values, axes=axis)
    return sfft.fftshift(sfft.ifft(shifted, axis=axis), axes=axis)


def _kernel(rows: np.ndarray, columns: np.ndarray, sign: int, model: ModelOrder) -> np.ndarray:
    """e^{sign 2 pi i r c} (finite: e^{sign 2 pi i r c / L} with integer reduction)."""
    if model.is_finite:
        products = np.outer(rows.astype(np.int64), columns.astype(np.int64)) % model.L
        return np.exp(sign * 2j * np.pi * products / model.L)
    return np.exp(sign * 2j * np.pi * np.outer(rows, columns))


def physical_axes(model: ModelOrder) -> Tuple[np.ndarray, np.ndarray, float, float]:
    """Physical TF coordinates of the STFT grid and their spacings (x, w, dx, dw)."""
    if model.is_finite:
        coords = centered(np.arange(model.L), model.L) / math.sqrt(model.L)
        spacing = 1.0 / math.sqrt(model.L)
        return coords, coords, spacing, spacing
    return model.time_axis(), model.frequency_axis(), model.step, 1.0 / model.extent


# ========================================
# Fourier transforms
# ========================================

def dft(f: Signal) -> Signal:
    """
    Fourier transform with the e^{-2 pi i t.w} kernel.

    Finite: unitary DFT. Continuum: Riemann sum on the symmetric grid; the
    result lives on the grid with extent 1/step and step 1/extent.
    """
    model = f.model
    if model.is_finite:
        return Signal.create(model, sfft.fft(f.values, norm="ortho"))
    out = ModelOrder.continuum(extent=1.0 / model.step, step=1.0 / model.extent)
    return Signal.create(out, model.step * centered_fft(f.values))


def idft(f: Signal) -> Signal:
    """Inverse of dft."""
    model = f.model
    if model.is_finite:
        return Signal.create(model, sfft.ifft(f.values, norm="ortho"))
    out = ModelOrder.continuum(extent=1.0 / model.step, step=1.0 / model.extent)
    return Signal.create(out, centered_ifft(f.values) / out.step)


def symplectic_fourier(F: TFMatrix) -> TFMatrix:
    """
    Symplectic Fourier transform.

        (F_s F)(x, w) = sum_{y, eta} F(y, eta) e^{2 pi i (y.w - x.eta)} * measure

    The result is sampled on the same grid. In the finite model (and on any
    continuum grid whose cell is 1/n) it is exactly involutive.

    Raises:
        InvalidModelError: If the grid is not square
    """
    if not F.is_square:
        raise InvalidModelError(f"symplectic Fourier transform needs a square grid, got {F.shape}")

    forward = _kernel(F.x_axis, F.omega_axis, +1, F.model)     # [y, w]
    backward = _kernel(F.x_axis, F.omega_axis, -1, F.model)    # [x, eta]
    values = F.measure * (backward @ (F.values.T @ forward))
    return F.with_values(values)


# ========================================
# Short-time Fourier transform
# ========================================

def stft(f: Signal, g: Signal) -> TFMatrix:
    """
    Short-time Fourier transform V_g f(x, w) = <f, pi(x, w) g> on the full grid.

    Args:
        f: Signal
        g: Window, same model

    Returns:
        TFMatrix indexed by (time_axis, frequency_axis) of the model

    Raises:
        DegenerateWindowError: If g is identically zero
    """
    model = _same_model(f, g)
    _check_window(g)

    n = model.size
    offset = 0 if model.is_finite else model.half
    shifts = np.arange(n) - offset
    window_index = (np.arange(n)[None, :] - shifts[:, None]) % n
    products = f.values[None, :] * np.conj(g.values[window_index])

    if model.is_finite:
        values = sfft.fft(products, axis=1)
    else:
        values = model.step * centered_fft(products, axis=1)

    return TFMatrix(model, values, model.time_axis(), model.frequency_axis(), model.tf_cell)


def stft_at(f: Signal, g: Signal, points: Sequence[TFPoint], deterministic: Optional[bool] = None) -> np.ndarray:
    """
    V_g f at arbitrary TF points.

    Continuum points off the sampling grid are evaluated by resampling the
    window's analytic profile.

    Raises:
        IncommensurateShiftError: Off-grid continuum point and no profile on g
    """
    _same_model(f, g)
    _check_window(g)
    return np.array(
        parallel_map(lambda p: f.inner(tf_shift(g, p, allow_resample=True)), points, deterministic),
        dtype=complex,
    )


# ========================================
# Wigner distribution
# ========================================

def cross_wigner(f: Signal, g: Signal, method: str = "stft") -> TFMatrix:
    """
    Cross-Wigner distribution W(f, g)(x, w) = 2 e^{4 pi i x.w} V_{g~} f(2x, 2w).

    Args:
        f: Signal
        g: Signal, same model
        method: "stft" (through the STFT of the reflected window) or "direct"
            (lag sum 2 sum_tau f(x + tau) conj(g(x - tau)) e^{-4 pi i tau.w})

    Returns:
        TFMatrix. Finite: all residues (x, w), index doubling mod L.
        Continuum: the half-spacing grid (t/2, nu/2) of the model's grid.

    Raises:
        UnsupportedModelError: Finite model with odd L
    """
    model = _same_model(f, g)
    n = model.size
    if model.is_finite and n % 2:
        raise UnsupportedModelError(f"cross-Wigner needs an even L, got L={n}")
    if method not in ("stft", "direct"):
        raise ValueError(f"unknown cross-Wigner method: {method!r}")

    if model.is_finite:
        L = model.L
        index = np.arange(L)
        if method == "stft":
            V = stft(f, g.reflect()).values
            doubled = (2 * index) % L
            phase = _kernel(index, 2 * index, +1, model)
            values = 2.0 * phase * V[np.ix_(doubled, doubled)]
        else:
            lags = np.arange(L)
            terms = f.values[(index[:, None] + lags[None, :]) % L] * np.conj(g.values[(index[:, None] - lags[None, :]) % L])
            values = 2.0 * terms @ _kernel(2 * lags, index, -1, model)
        return TFMatrix(model, values, index, index, 1.0 / (4 * L))

    times, freqs = model.time_axis(), model.frequency_axis()
    half_phase = np.exp(1j * np.pi * np.outer(times, freqs))
    if method == "stft":
        V = stft(f, g.reflect()).values
    else:
        rows = np.arange(n)
        mirror = (rows[:, None] - rows[None, :] + model.half) % n
        terms = f.values[None, :] * np.conj(g.values[mirror])
        V = model.step * centered_fft(terms, axis=1)
    return TFMatrix(model, 2.0 * half_phase * V, times / 2.0, freqs / 2.0, model.tf_cell / 4.0)


# ========================================
# Identity residuals and norms
# ========================================

def moyal_residual(f1: Signal, f2: Signal, g1: Signal, g2: Signal) -> float:
    """|sum V_{g1}f1 conj(V_{g2}f2) w - <f1, f2> conj(<g1, g2>)|."""
    _same_model(f1, f2, g1, g2)
    lhs = (stft(f1, g1) * stft(f2, g2).conj()).total()
    rhs = f1.inner(f2) * np.conj(g1.inner(g2))
    return float(abs(lhs - rhs))


def fourier_rotation_residual(f: Signal, g: Signal) -> float:
    """
    max |V_{g^} f^(x, w) - e^{-2 pi i x.w} V_g f(-w, x)| over the grid.

    Raises:
        UnsupportedModelError: Continuum grid whose time and frequency
            spacings differ (step * extent != 1)
    """
    model = _same_model(f, g)
    if not model.is_finite and not math.isclose(model.step * model.extent, 1.0, rel_tol=1e-12):
        raise UnsupportedModelError("Fourier rotation needs equal time and frequency spacing")

    rotated = stft(dft(f), dft(g))
    direct = stft(f, g)
    n = model.size
    flipped = direct.values[(-np.arange(n)) % n, :].T
    phase = _kernel(direct.x_axis, direct.omega_axis, -1, model)
    return float(np.max(np.abs(rotated.values - phase * flipped)))


def _mixed_norm(values: np.ndarray, p: float, q: float, dx: float, dw: float) -> float:
    """L^q over w of the L^p norms over x (axis 0)."""
    if np.isinf(p):
        inner = np.max(values, axis=0)
    else:
        inner = (np.sum(values ** p, axis=0) * dx) ** (1.0 / p)
    if np.isinf(q):
        return float(np.max(inner))
    return float((np.sum(inner ** q) * dw) ** (1.0 / q))


def _check_exponents(p: float, q: float) -> None:
    for name, value in (("p", p), ("q", q)):
        if not value >= 1:
            raise InvalidExponentError(f"{name}={value} must be >= 1 (use inf for the maximum)")


def modulation_norm(
    f: Signal,
    g: Signal,
    p: float = 2.0,
    q: float = 2.0,
    weight: Optional[Union[WeightSpec, float]] = None,
) -> float:
    """
    Riemann-sum estimate of the weighted modulation norm ||f||_{M_{p,q}^{v_s}}.

    Args:
        f: Signal
        g: Window
        p: Exponent over x (>= 1, inf allowed)
        q: Exponent over w (>= 1, inf allowed)
        weight: WeightSpec or its order s (default s=0)

    Raises:
        InvalidExponentError: If p or q is below 1
    """
    _check_exponents(p, q)
    if not isinstance(weight, WeightSpec):
        weight = WeightSpec(float(weight or 0.0))

    V = stft(f, g)
    xs, ws, dx, dw = physical_axes(f.model)
    weighted = np.abs(V.values) * weight.evaluate(xs[:, None], ws[None, :])
    return _mixed_norm(weighted, p, q, dx, dw)
