"""
Runs identity checks and formats the pass/fail matrix.

Every check receives its own generator spawned from the run seed, so a
check's inputs do not depend on which other checks run or in what order.
"""

import logging
from typing import Dict, List, Optional

import numpy as np

from ..errors import GaborTorusError
from ..parallel import parallel_map
from .base import CheckResult, IdentityCheck
from .registry import CheckRegistry

logger = logging.getLogger(__name__)


class VerificationRunner:
    """Evaluates the checks of a registry."""

    def __init__(self, registry: CheckRegistry):
        self.registry = registry

    def _generators(self, seed: int, count: int) -> List[np.random.Generator]:
        return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]

    def _run_one(self, check: IdentityCheck, rng: np.random.Generator) -> CheckResult:
        logger.info(f"Running check {check.check_id}")
        try:
            result = check.run(rng)
        except GaborTorusError as e:
            logger.error(f"Check {check.check_id} raised {type(e).__name__}: {e}")
            return CheckResult(
                check_id=check.check_id,
                identity=check.identity,
                passed=False,
                residual=float("inf"),
                tolerance=check.tolerance,
                runtime_s=0.0,
                error=f"{type(e).__name__}: {e}",
                criterion=check.criterion,
                formula=check.formula,
            )
        level = logging.INFO if result.passed else logging.WARNING
        logger.log(level, f"{check.check_id}: residual {result.residual:.3e} (tol {check.tolerance:.0e}) in {result.runtime_s:.2f}s")
        return result

    def run_all(
        self,
        seed: int = 0,
        identities: Optional[List[str]] = None,
        deterministic: Optional[bool] = None,
    ) -> List[CheckResult]:
        """
        Run every registered check (optionally only some identities).

        Returns:
            Results in registry order
        """
        checks = self.registry.get_all_checks()
        generators = self._generators(seed, len(checks))
        pairs = [
            (check, rng) for check, rng in zip(checks, generators)
            if identities is None or check.identity in identities
        ]
        return parallel_map(lambda pair: self._run_one(*pair), pairs, deterministic)


def format_matrix(results: List[CheckResult]) -> str:
    """
    Plain-text pass/fail matrix, one row per check, keyed by acceptance
    criterion ("-" for supplementary checks) and followed by the identity
    each row checks.
    """
    header = f"{'crit':>4}  {'check':<28} {'identity':<16} {'residual':>11} {'tolerance':>10} {'time[s]':>8}  result"
    lines = [header, "-" * len(header)]
    for r in results:
        verdict = "PASS" if r.passed else ("ERROR" if r.error else "FAIL")
        criterion = "-" if r.criterion is None else str(r.criterion)
        lines.append(
            f"{criterion:>4}  {r.check_id:<28} {r.identity:<16} {r.residual:>11.3e} {r.tolerance:>10.0e} "
            f"{r.runtime_s:>8.2f}  {verdict}"
        )
    passed = sum(1 for r in results if r.passed)
    lines.append("-" * len(header))

    formulas = [(r.check_id, r.formula) for r in results if r.formula]
    if formulas:
        width = max(len(check_id) for check_id, _ in formulas)
        lines.extend(f"  {check_id:<{width}}  {formula}" for check_id, formula in formulas)
        lines.append("-" * len(header))
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)


def summarize(results: List[CheckResult]) -> Dict:
    """JSON form of a run: per-criterion and per-identity verdicts plus every result."""
    identities: Dict[str, bool] = {}
    criteria: Dict[str, bool] = {}
    for r in results:
        identities[r.identity] = identities.get(r.identity, True) and r.passed
        if r.criterion is not None:
            key = str(r.criterion)
            criteria[key] = criteria.get(key, True) and r.passed
    return {
        "passed": all(r.passed for r in results),
        "criteria": criteria,
        "identities": identities,
        "results": [r.to_dict() for r in results],
    }
