"""
Runtime Settings Module

Collects the numerical tolerances and execution options used across
gabortorus from environment variables (optionally loaded from a .env file).

Usage:
    from config.settings import get_tolerances, get_execution_config

    tolerances = get_tolerances()
    tolerances.finite_identity     # 1e-10 unless GABORTORUS_FINITE_TOL is set

    # Run configurations may override individual values
    tolerances = get_tolerances(overrides={"frame_ratio": 1e-6})
"""

import os
from typing import Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()


class Tolerances(BaseModel):
    """Numerical thresholds shared by every module."""

    frame_ratio: float = Field(1e-8, gt=0, description="A > frame_ratio * B declares a frame")
    finite_identity: float = Field(1e-10, gt=0, description="identity residuals in the finite model")
    continuum_identity: float = Field(1e-8, gt=0, description="identity residuals on the sampled grid")
    tail: float = Field(1e-12, gt=0, description="admissible tail of truncated lattice sums")
    singular_value: float = Field(1e-8, gt=0, description="smallest admissible singular value")
    invertibility_ratio: float = Field(1e-6, gt=0, description="A/B above which a theta is invertible")
    density: float = Field(0.05, gt=0, description="relative error allowed when emulating a density")


class ExecutionConfig(BaseModel):
    """Worker pool options; deterministic mode forces sequential evaluation."""

    deterministic: bool = True
    workers: int = Field(1, ge=1)
    log_level: str = "INFO"


_ENV_TOLERANCES = {
    "frame_ratio": "GABORTORUS_FRAME_RATIO",
    "finite_identity": "GABORTORUS_FINITE_TOL",
    "continuum_identity": "GABORTORUS_CONTINUUM_TOL",
    "tail": "GABORTORUS_TAIL_TOL",
    "singular_value": "GABORTORUS_SINGULAR_TOL",
    "invertibility_ratio": "GABORTORUS_INVERTIBILITY_RATIO",
    "density": "GABORTORUS_DENSITY_TOL",
}


def get_tolerances(overrides: Optional[Dict[str, float]] = None) -> Tolerances:
    """
    Get the effective tolerances.

    Args:
        overrides: Values that take precedence over the environment

    Returns:
        Tolerances model

    Raises:
        ValueError: If an environment variable is not a number
    """
    values: Dict[str, float] = {}
    for field, env_name in _ENV_TOLERANCES.items():
        raw = os.getenv(env_name)
        if raw is None:
            continue
        try:
            values[field] = float(raw)
        except ValueError:
            raise ValueError(f"Invalid {env_name}: {raw!r} is not a number")

    values.update(overrides or {})
    return Tolerances(**values)


def get_execution_config(deterministic: Optional[bool] = None) -> ExecutionConfig:
    """
    Get worker pool options from GABORTORUS_DETERMINISTIC / GABORTORUS_WORKERS.

    Args:
        deterministic: Override the environment (the CLI's --deterministic flag)
    """
    if deterministic is None:
        deterministic = os.getenv("GABORTORUS_DETERMINISTIC", "true").lower() in ("1", "true", "yes")

    workers = int(os.getenv("GABORTORUS_WORKERS", "1"))
    return ExecutionConfig(
        deterministic=deterministic,
        workers=max(workers, 1),
        log_level=os.getenv("GABORTORUS_LOG_LEVEL", "INFO").upper(),
    )


def print_config():
    """Print current configuration for debugging."""
    tolerances = get_tolerances()
    execution = get_execution_config()

    print(f"\n{'='*60}")
    print("gabortorus configuration")
    print(f"{'='*60}\n")

    print("Tolerances:")
    for name, value in tolerances.model_dump().items():
        print(f"  {name:20s} {value:.3g}")

    print()
    print("Execution:")
    print(f"  Deterministic: {execution.deterministic}")
    print(f"  Workers:       {execution.workers}")
    print(f"  Log level:     {execution.log_level}")

    print(f"\n{'='*60}\n")


if __name__ == "__main__":
    print_config()
