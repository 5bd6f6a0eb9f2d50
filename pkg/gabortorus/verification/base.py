"""
Base classes for identity checks.

An identity check evaluates one machine-checkable residual (Moyal, FIGA,
Janssen, ...) on randomized or closed-form inputs and compares it with a
tolerance. Checks are described in JSON catalogues and run by the
VerificationRunner.
"""

import time
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

Routine = Callable[..., Tuple[float, Dict[str, Any]]]


@dataclass
class CheckResult:
    """
    Outcome of one identity check.

    Attributes:
        check_id: Unique identifier of the check
        identity: Identity name the check belongs to (e.g. "figa")
        passed: Whether residual <= tolerance
        residual: Largest residual observed
        tolerance: Threshold the residual is compared with
        runtime_s: Wall-clock time of the check
        details: Per-case residuals and parameters
        error: Exception text when the check raised instead of returning
        criterion: Acceptance criterion the check belongs to, if any
        formula: The identity being checked, as catalogued
    """
    check_id: str
    identity: str
    passed: bool
    residual: float
    tolerance: float
    runtime_s: float
    details: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None
    criterion: Optional[int] = None
    formula: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class IdentityCheck(ABC):
    """
    Abstract base class for all identity checks.

    Checks are run in catalogue order (by criterion, then id).
    """

    def __init__(
        self,
        check_id: str,
        identity: str,
        description: str,
        tolerance: float,
        criterion: Optional[int] = None,
        metadata: Optional[Dict[str, Any]] = None,
        formula: Optional[str] = None
    ):
        """
        Initialize an identity check.

        Args:
            check_id: Unique identifier for this check
            identity: Identity name (moyal, figa, janssen, ...)
            description: Human-readable description
            tolerance: Largest admissible residual
            criterion: Acceptance criterion number this check belongs to
            metadata: Optional metadata echoed in reports
            formula: Statement of the identity, keys the pass/fail matrix
        """
        self.check_id = check_id
        self.identity = identity
        self.description = description
        self.tolerance = tolerance
        self.criterion = criterion
        self.metadata = metadata or {}
        self.formula = formula

    @abstractmethod
    def run(self, rng: np.random.Generator) -> CheckResult:
        """
        Evaluate the check.

        Args:
            rng: Random generator seeded by the runner

        Returns:
            CheckResult with passed=True iff the residual is within tolerance
        """
        pass

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} {self.check_id} ({self.identity}, tol={self.tolerance:.0e})>"


class RoutineCheck(IdentityCheck):
    """
    Identity check backed by a residual routine from the checks module.

    The routine receives the generator and the catalogue parameters and
    returns (residual, details).
    """

    def __init__(
        self,
        check_id: str,
        identity: str,
        description: str,
        tolerance: float,
        routine: Routine,
        params: Optional[Dict[str, Any]] = None,
        criterion: Optional[int] = None,
        metadata: Optional[Dict[str, Any]] = None,
        formula: Optional[str] = None
    ):
        super().__init__(check_id, identity, description, tolerance, criterion, metadata, formula)
        self.routine = routine
        self.params = params or {}

    def run(self, rng: np.random.Generator) -> CheckResult:
        start = time.perf_counter()
        residual, details = self.routine(rng, **self.params)
        runtime = time.perf_counter() - start
        return CheckResult(
            check_id=self.check_id,
            identity=self.identity,
            passed=bool(residual <= self.tolerance),
            residual=float(residual),
            tolerance=self.tolerance,
            runtime_s=runtime,
            details={"params": self.params, **details},
            criterion=self.criterion,
            formula=self.formula,
        )
