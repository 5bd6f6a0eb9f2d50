"""
Run configurations for the command-line front end and the API.

A run configuration is a JSON (or YAML) document:

    {
      "model":   {"kind": "finite", "L": 12},
      "lattice": {"a": 2, "b": 2},
      "window":  {"gaussian": 3.141592653589793},
      "signal":  {"file": "signal.csv"},
      "options": {"radius": 8},
      "out": "out/framecheck",
      "seed": 0,
      "tolerances": {"frame_ratio": 1e-8}
    }

Windows and signals share one descriptor syntax: "delta", {"delta": index},
{"gaussian": T}, {"modulation": w} or {"file": path}. Relative file paths
are resolved against the configuration's directory.
"""

import logging
import math
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator

from config.settings import Tolerances, get_tolerances

from .errors import ConfigError, GaborTorusError
from .export import read_json, read_signal_csv
from .phase_space import ModelOrder, SeparableLattice, Signal
from .theta import SiegelMatrix, gaussian_window

logger = logging.getLogger(__name__)

Descriptor = Union[str, Dict[str, Any]]


def _number(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ValueError(f"{name} must be a finite number, got {value!r}")
    return value


def _integer(value: Any, name: str) -> int:
    _number(value, name)
    if float(value) != int(value):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    return int(value)


class RunConfig(BaseModel):
    """Validated run configuration."""

    model: Dict[str, Any] = Field(default_factory=lambda: {"kind": "finite", "L": 12})
    lattice: Optional[Dict[str, Any]] = None
    window: Descriptor = Field(default_factory=lambda: {"gaussian": math.pi})
    signal: Optional[Descriptor] = None
    options: Dict[str, Any] = Field(default_factory=dict)
    out: str = "out"
    seed: int = Field(0, ge=0)
    deterministic: bool = True
    tolerances: Dict[str, float] = Field(default_factory=dict)
    base_dir: str = "."

    @field_validator("model")
    @classmethod
    def check_model(cls, value: Dict[str, Any]) -> Dict[str, Any]:
        value = dict(value)
        kind = value.get("kind")
        if kind == "finite":
            if "L" not in value:
                raise ValueError("finite model descriptor needs an order 'L'")
            value["L"] = _integer(value["L"], "L")
        elif kind == "continuum":
            for name in ("extent", "step"):
                if name in value:
                    value[name] = _number(value[name], name)
            if "N" in value:
                value["N"] = _integer(value["N"], "N")
        try:
            ModelOrder.from_descriptor(value)
        except (GaborTorusError, TypeError, ValueError) as e:
            raise ValueError(str(e))
        return value

    @field_validator("lattice")
    @classmethod
    def check_lattice(cls, value: Optional[Dict[str, Any]]) -> Optional[Dict[str, Any]]:
        if value is None:
            return value
        if "generator" in value:
            generator = value["generator"]
            if not isinstance(generator, list) or not all(isinstance(row, list) for row in generator):
                raise ValueError(f"lattice generator must be a list of rows, got {generator!r}")
            for row in generator:
                for entry in row:
                    _number(entry, "generator entry")
            return value
        missing = [name for name in ("a", "b") if name not in value]
        if missing:
            raise ValueError(f"lattice descriptor is missing {', '.join(missing)}")
        for name in ("a", "b"):
            _number(value[name], name)
        return value

    @field_validator("window", "signal")
    @classmethod
    def check_descriptor(cls, value: Optional[Descriptor]) -> Optional[Descriptor]:
        if value is None or value == "delta":
            return value
        if not isinstance(value, dict) or len(value) != 1:
            raise ValueError(f"descriptor must be 'delta' or a one-key object, got {value!r}")
        kind = next(iter(value))
        if kind not in ("delta", "gaussian", "modulation", "file"):
            raise ValueError(f"unknown descriptor kind: {kind!r}")
        return value

    @field_validator("tolerances")
    @classmethod
    def check_tolerances(cls, value: Dict[str, float]) -> Dict[str, float]:
        unknown = set(value) - set(Tolerances.model_fields)
        if unknown:
            raise ValueError(f"unknown tolerance names: {sorted(unknown)}")
        return value

    # ----------------------------------------
    # Resolved objects
    # ----------------------------------------

    def model_order(self) -> ModelOrder:
        return ModelOrder.from_descriptor(self.model)

    def lattice_for(self, model: Optional[ModelOrder] = None) -> SeparableLattice:
        if self.lattice is None:
            raise ConfigError("this command needs a lattice descriptor")
        return SeparableLattice.from_descriptor(self.lattice, model or self.model_order())

    def effective_tolerances(self) -> Tolerances:
        return get_tolerances(self.tolerances)

    def resolve(self, path: str) -> Path:
        candidate = Path(path)
        return candidate if candidate.is_absolute() else Path(self.base_dir) / candidate

    def siegel(self) -> SiegelMatrix:
        """The Gaussian parameter of the window (theta commands)."""
        if not isinstance(self.window, dict) or "gaussian" not in self.window:
            raise ConfigError("this command needs a {'gaussian': T} window")
        return SiegelMatrix.from_descriptor(self.window["gaussian"]).to_decay()

    def build(self, descriptor: Descriptor, model: Optional[ModelOrder] = None) -> Signal:
        """Signal described by a window/signal descriptor."""
        model = model or self.model_order()
        if descriptor == "delta":
            return Signal.delta(model)

        kind, value = next(iter(descriptor.items()))
        if kind == "delta":
            return Signal.delta(model, 0 if value is True else int(value))
        if kind == "gaussian":
            return gaussian_window(SiegelMatrix.from_descriptor(value).to_decay(), model)
        if kind == "modulation":
            positions = model.time_axis()
            frequency = float(value) / model.L if model.is_finite else float(value)
            return Signal.create(model, np.exp(2j * np.pi * frequency * positions))
        return read_signal_csv(self.resolve(value), model)

    def window_signal(self, model: Optional[ModelOrder] = None) -> Signal:
        return self.build(self.window, model)

    def input_signal(self, model: Optional[ModelOrder] = None) -> Signal:
        if self.signal is None:
            raise ConfigError("this command needs a signal descriptor")
        return self.build(self.signal, model)


def parse_run_config(data: Dict[str, Any], base_dir: Union[str, Path] = ".") -> RunConfig:
    """
    Validate a configuration mapping.

    Raises:
        ConfigError: If validation fails
    """
    if not isinstance(data, dict):
        raise ConfigError("run configuration must be an object")
    try:
        return RunConfig(**{**data, "base_dir": str(base_dir)})
    except ValidationError as e:
        raise ConfigError(f"Invalid run configuration: {e}")


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """
    Load a run configuration from a .json, .yaml or .yml file.

    Raises:
        ConfigError: Missing, unparsable or invalid file
    """
    path = Path(path)
    if path.suffix in (".yaml", ".yml"):
        try:
            with open(path, "r") as f:
                data = yaml.safe_load(f)
        except FileNotFoundError:
            raise ConfigError(f"Config file not found: {path}")
        except yaml.YAMLError as e:
            raise ConfigError(f"Invalid YAML in {path}: {e}")
    else:
        data = read_json(path)

    config = parse_run_config(data, path.parent)
    logger.info(f"Loaded run configuration from {path}")
    return config
