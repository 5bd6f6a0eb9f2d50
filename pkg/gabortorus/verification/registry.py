"""
Check registry and JSON loader for the identity catalogue.

This module provides functionality to:
1. Load identity checks from JSON catalogues
2. Validate check definitions against the known residual routines
3. Maintain a registry of all available checks
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..errors import ConfigError
from .base import IdentityCheck, RoutineCheck
from .checks import ROUTINES

logger = logging.getLogger(__name__)


class CheckValidationError(ConfigError):
    """Raised when a check definition fails validation."""
    pass


class CheckRegistry:
    """
    Registry for all identity checks.

    Checks are kept ordered by acceptance criterion (uncatalogued
    criteria last), then by id.
    """

    def __init__(self):
        self._checks: List[IdentityCheck] = []
        self._checks_by_id: Dict[str, IdentityCheck] = {}

    def load_from_json(self, json_path: Path) -> int:
        """
        Load checks from a JSON catalogue.

        Args:
            json_path: Path to a file with a top-level "checks" array

        Returns:
            Number of checks loaded

        Raises:
            CheckValidationError: If the file is not a valid catalogue
        """
        try:
            with open(json_path, "r") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise CheckValidationError(f"Invalid JSON in {json_path}: {e}")
        except FileNotFoundError:
            logger.warning(f"Check catalogue not found: {json_path}")
            return 0

        if not isinstance(data, dict):
            raise CheckValidationError("JSON root must be an object")
        if "checks" not in data:
            raise CheckValidationError("JSON must contain 'checks' array")
        if not isinstance(data["checks"], list):
            raise CheckValidationError("'checks' must be an array")

        loaded_count = 0
        for i, check_def in enumerate(data["checks"]):
            try:
                self.register(self._load_check_from_dict(check_def))
                loaded_count += 1
            except CheckValidationError as e:
                logger.error(f"Failed to load check #{i} from {json_path}: {e}")

        logger.info(f"Loaded {loaded_count} checks from {json_path}")
        return loaded_count

    def _load_check_from_dict(self, check_def: Dict[str, Any]) -> IdentityCheck:
        """
        Build a RoutineCheck from its catalogue entry.

        Raises:
            CheckValidationError: Missing fields, wrong types or an unknown routine
        """
        if not isinstance(check_def, dict):
            raise CheckValidationError("check definition must be an object")
        for field in ("check_id", "identity", "description", "routine", "tolerance"):
            if field not in check_def:
                raise CheckValidationError(f"Missing required field: {field}")

        if not isinstance(check_def["check_id"], str):
            raise CheckValidationError("check_id must be a string")
        if check_def["routine"] not in ROUTINES:
            raise CheckValidationError(f"Unknown routine: {check_def['routine']!r}")
        tolerance = check_def["tolerance"]
        if not isinstance(tolerance, (int, float)) or isinstance(tolerance, bool) or tolerance < 0:
            raise CheckValidationError("tolerance must be a nonnegative number")
        params = check_def.get("params", {})
        if not isinstance(params, dict):
            raise CheckValidationError("params must be an object")
        criterion = check_def.get("criterion")
        if criterion is not None and not isinstance(criterion, int):
            raise CheckValidationError("criterion must be an integer")
        formula = check_def.get("formula")
        if formula is not None and not isinstance(formula, str):
            raise CheckValidationError("formula must be a string")

        return RoutineCheck(
            check_id=check_def["check_id"],
            identity=check_def["identity"],
            description=check_def["description"],
            tolerance=float(tolerance),
            routine=ROUTINES[check_def["routine"]],
            params=params,
            criterion=criterion,
            metadata=check_def.get("metadata", {}),
            formula=formula,
        )

    def register(self, check: IdentityCheck) -> None:
        """
        Register a check.

        Raises:
            CheckValidationError: If check_id already exists
        """
        if check.check_id in self._checks_by_id:
            raise CheckValidationError(f"Check with id '{check.check_id}' already registered")

        self._checks.append(check)
        self._checks_by_id[check.check_id] = check
        self._checks.sort(key=lambda c: (c.criterion is None, c.criterion or 0, c.check_id))
        logger.debug(f"Registered check: {check}")

    def get_all_checks(self) -> List[IdentityCheck]:
        return self._checks.copy()

    def get_check_by_id(self, check_id: str) -> Optional[IdentityCheck]:
        return self._checks_by_id.get(check_id)

    def get_checks_by_identity(self, identity: str) -> List[IdentityCheck]:
        return [check for check in self._checks if check.identity == identity]

    def clear(self) -> None:
        self._checks.clear()
        self._checks_by_id.clear()

    def get_stats(self) -> Dict[str, Any]:
        identities: Dict[str, int] = {}
        for check in self._checks:
            identities[check.identity] = identities.get(check.identity, 0) + 1
        return {
            "total_checks": len(self._checks),
            "check_ids": [c.check_id for c in self._checks],
            "identities": identities,
        }


def load_default_checks() -> CheckRegistry:
    """Load the acceptance catalogue shipped with the package."""
    registry = CheckRegistry()
    catalogue = Path(__file__).parent / "catalogue" / "acceptance.json"
    registry.load_from_json(catalogue)
    logger.info(f"Check registry initialized with {len(registry.get_all_checks())} checks")
    return registry
