"""
File formats for signals, time-frequency matrices, sequences and reports.

- Signals: CSV with header "index,re,im" (finite) or "t,re,im" (continuum).
- TF matrices: CSV "x,omega,re,im" (one row per grid point, x major) and a
  plain (P2) PGM of the magnitude with omega increasing upwards.
- Twisted sequences and reports: JSON (numpy scalars and complex numbers are
  converted on the way out).

Every reader raises ConfigError when a file is missing or malformed.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from .errors import ConfigError, InvalidModelError
from .nctorus import TwistedSequence
from .phase_space import ModelOrder, Signal
from .transforms import TFMatrix

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_FLOAT = "%.17g"


def _prepare(path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


# ========================================
# Signals
# ========================================

def write_signal_csv(signal: Signal, path: PathLike) -> Path:
    """Write the samples of a signal with their index (finite) or position (continuum)."""
    path = _prepare(path)
    model = signal.model
    if model.is_finite:
        header, position, fmt = "index,re,im", np.arange(model.L), ["%d", _FLOAT, _FLOAT]
    else:
        header, position, fmt = "t,re,im", model.time_axis(), [_FLOAT] * 3
    data = np.column_stack([position, signal.values.real, signal.values.imag])
    np.savetxt(path, data, delimiter=",", header=header, comments="", fmt=fmt)
    logger.debug(f"Wrote {model.size} samples to {path}")
    return path


def read_signal_csv(path: PathLike, model: Optional[ModelOrder] = None) -> Signal:
    """
    Read a signal CSV.

    Without a model, a finite file defines L by its row count and a continuum
    file defines step and extent by its t column.

    Raises:
        ConfigError: Missing file, unknown header or malformed rows
    """
    path = Path(path)
    try:
        with open(path, "r") as f:
            header = f.readline().strip().replace(" ", "")
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except FileNotFoundError:
        raise ConfigError(f"Signal file not found: {path}")
    except (OSError, ValueError) as e:
        raise ConfigError(f"Unreadable signal file {path}: {e}")

    if header not in ("index,re,im", "t,re,im") or data.shape[1] != 3:
        raise ConfigError(f"{path}: expected columns index,re,im or t,re,im, got {header!r}")
    values = data[:, 1] + 1j * data[:, 2]

    try:
        if model is None:
            if header == "index,re,im":
                model = ModelOrder.finite(len(values))
            else:
                if len(values) < 2:
                    raise ConfigError(f"{path}: a continuum signal needs at least two samples")
                step = float(data[1, 0] - data[0, 0])
                model = ModelOrder.continuum(extent=step * len(values), step=step)
        if header == "t,re,im" and (model.is_finite or not np.allclose(data[:, 0], model.time_axis(), atol=1e-9)):
            raise ConfigError(f"{path}: sample positions do not match {model.describe()}")
        return Signal.create(model, values)
    except InvalidModelError as e:
        raise ConfigError(f"{path}: {e}")


# ========================================
# TF matrices
# ========================================

def write_tf_csv(tf: TFMatrix, path: PathLike) -> Path:
    """One row x,omega,re,im per grid point."""
    path = _prepare(path)
    xs, ws = np.meshgrid(tf.x_axis, tf.omega_axis, indexing="ij")
    data = np.column_stack([xs.ravel(), ws.ravel(), tf.values.real.ravel(), tf.values.imag.ravel()])
    np.savetxt(path, data, delimiter=",", header="x,omega,re,im", comments="", fmt=_FLOAT)
    return path


def to_pgm(magnitude: np.ndarray, maxval: int = 255) -> str:
    """
    Plain PGM of a nonnegative array indexed [x, omega]: x runs left to right
    and omega bottom to top.
    """
    magnitude = np.asarray(magnitude, dtype=float)
    peak = float(magnitude.max()) if magnitude.size else 0.0
    scaled = np.zeros_like(magnitude) if peak <= 0 else np.rint(magnitude / peak * maxval)
    image = scaled.T[::-1].astype(int)

    lines = ["P2", f"{image.shape[1]} {image.shape[0]}", str(maxval)]
    lines.extend(" ".join(str(v) for v in row) for row in image)
    return "\n".join(lines) + "\n"


def write_pgm(tf: TFMatrix, path: PathLike) -> Path:
    """Magnitude image of a TF matrix."""
    path = _prepare(path)
    path.write_text(to_pgm(tf.magnitude()))
    logger.debug(f"Wrote {tf.shape[0]}x{tf.shape[1]} magnitude image to {path}")
    return path


# ========================================
# JSON
# ========================================

def to_builtin(value: Any) -> Any:
    """JSON-ready copy: numpy scalars and arrays become builtins, complex becomes {re, im}."""
    if isinstance(value, dict):
        return {str(k): to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_builtin(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def dumps(data: Any) -> str:
    """Deterministic JSON text (sorted keys, two-space indent)."""
    return json.dumps(to_builtin(data), indent=2, sort_keys=True)


def write_json(data: Any, path: PathLike) -> Path:
    path = _prepare(path)
    path.write_text(dumps(data) + "\n")
    return path


def read_json(path: PathLike) -> Dict:
    """
    Raises:
        ConfigError: Missing file or invalid JSON
    """
    path = Path(path)
    try:
        with open(path, "r") as f:
            return json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"File not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON in {path}: {e}")


def write_sequence_json(sequence: TwistedSequence, path: PathLike) -> Path:
    return write_json(sequence.to_dict(), path)


def read_sequence_json(path: PathLike) -> TwistedSequence:
    data = read_json(path)
    try:
        return TwistedSequence.from_dict(data)
    except (KeyError, TypeError) as e:
        raise ConfigError(f"{path} is not a coefficient dump: {e}")
