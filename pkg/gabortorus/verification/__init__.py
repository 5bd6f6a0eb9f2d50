"""
Identity verification framework.

A catalogue of machine-checkable identities (Moyal, FIGA, Janssen,
associativity, Poisson summation, the theta functional equation, ...) that
`gabortorus verify-all` runs end to end.

Usage:
    from gabortorus.verification import get_default_runner, format_matrix

    results = get_default_runner().run_all(seed=0)
    print(format_matrix(results))
"""

import logging
from typing import Optional

from .base import CheckResult, IdentityCheck, RoutineCheck
from .registry import CheckRegistry, CheckValidationError, load_default_checks
from .runner import VerificationRunner, format_matrix, summarize

logger = logging.getLogger(__name__)

_default_runner: Optional[VerificationRunner] = None


def get_default_runner() -> VerificationRunner:
    """Runner over the shipped catalogue, created on first use."""
    global _default_runner

    if _default_runner is None:
        logger.info("Initializing default verification runner")
        _default_runner = VerificationRunner(load_default_checks())

    return _default_runner


__all__ = [
    "CheckResult",
    "IdentityCheck",
    "RoutineCheck",
    "CheckRegistry",
    "CheckValidationError",
    "load_default_checks",
    "VerificationRunner",
    "format_matrix",
    "summarize",
    "get_default_runner",
]
