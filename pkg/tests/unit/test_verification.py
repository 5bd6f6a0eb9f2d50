#!/usr/bin/env python3
"""
Tests for the check registry, the catalogue loader and the runner.
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

import json

import numpy as np
import pytest

from gabortorus.errors import ConfigError, NotAFrameError
from gabortorus.verification import (
    CheckRegistry,
    CheckValidationError,
    RoutineCheck,
    VerificationRunner,
    format_matrix,
    load_default_checks,
    summarize,
)
from gabortorus.verification.checks import gt_structure


def constant_routine(rng, value=0.0):
    return value, {"value": value}


def failing_routine(rng):
    raise NotAFrameError("no lower bound")


def make_check(check_id, identity="toy", tolerance=1e-10, routine=constant_routine, criterion=None, **params):
    return RoutineCheck(check_id, identity, "toy check", tolerance, routine, params, criterion)


def test_default_catalogue():
    registry = load_default_checks()
    stats = registry.get_stats()
    assert stats["total_checks"] == 20
    assert stats["identities"]["figa"] == 2
    # criteria first, in order; uncatalogued checks last
    criteria = [c.criterion for c in registry.get_all_checks()]
    numbered = [c for c in criteria if c is not None]
    assert numbered == sorted(numbered)
    assert criteria[-1] is None
    assert registry.get_check_by_id("moyal-finite").tolerance == 1e-10
    assert registry.get_check_by_id("gt-factorization").tolerance == 1e-12
    assert registry.get_check_by_id("gt-symplectic").tolerance == 1e-10
    assert all(check.formula for check in registry.get_all_checks())


def test_duplicate_ids_are_rejected():
    registry = CheckRegistry()
    registry.register(make_check("a"))
    with pytest.raises(CheckValidationError):
        registry.register(make_check("a"))
    assert issubclass(CheckValidationError, ConfigError)


def test_catalogue_validation(tmp_path):
    path = tmp_path / "catalogue.json"
    path.write_text(json.dumps({"checks": [
        {"check_id": "ok", "identity": "moyal", "description": "d", "routine": "moyal", "tolerance": 1e-10,
         "params": {"L_values": [4], "trials": 1}},
        {"check_id": "unknown-routine", "identity": "x", "description": "d", "routine": "nope", "tolerance": 1e-10},
        {"check_id": "negative", "identity": "x", "description": "d", "routine": "moyal", "tolerance": -1},
        {"identity": "x", "description": "d", "routine": "moyal", "tolerance": 1e-10},
    ]}))
    registry = CheckRegistry()
    assert registry.load_from_json(path) == 1
    assert registry.get_check_by_id("ok") is not None

    bad = tmp_path / "bad.json"
    bad.write_text('{"version": "1.0"}')
    with pytest.raises(CheckValidationError):
        registry.load_from_json(bad)
    assert CheckRegistry().load_from_json(tmp_path / "missing.json") == 0


def test_runner_filters_and_reports_errors():
    registry = CheckRegistry()
    registry.register(make_check("pass", criterion=1))
    registry.register(make_check("fail", criterion=2, value=1e-3))
    registry.register(make_check("raise", identity="other", routine=failing_routine))
    runner = VerificationRunner(registry)

    results = runner.run_all(seed=0, deterministic=True)
    by_id = {r.check_id: r for r in results}
    assert [r.check_id for r in results] == ["pass", "fail", "raise"]
    assert by_id["pass"].passed
    assert not by_id["fail"].passed
    assert by_id["raise"].error.startswith("NotAFrameError")

    matrix = format_matrix(results)
    assert "ERROR" in matrix and "FAIL" in matrix
    assert matrix.endswith("1/3 checks passed")

    summary = summarize(results)
    assert summary["passed"] is False
    assert summary["identities"] == {"toy": False, "other": False}

    subset = runner.run_all(seed=0, identities=["other"], deterministic=True)
    assert [r.check_id for r in subset] == ["raise"]


def test_runner_generators_do_not_depend_on_subset():
    registry = load_default_checks()
    runner = VerificationRunner(registry)
    full = runner.run_all(seed=3, identities=["representation"], deterministic=True)
    again = runner.run_all(seed=3, identities=["representation", "poisson"], deterministic=True)
    first = [r for r in again if r.identity == "representation"]
    assert full[0].residual == first[0].residual


def test_matrix_is_keyed_by_criterion_and_formula():
    registry = CheckRegistry()
    registry.register(RoutineCheck("moyal", "moyal", "toy", 1e-10, constant_routine, {}, 1, formula="<Vf, Vg> = <f, g>"))
    registry.register(RoutineCheck("moyal-2", "moyal", "toy", 1e-10, constant_routine, {"value": 1.0}, 1))
    registry.register(make_check("extra"))
    results = VerificationRunner(registry).run_all(seed=0, deterministic=True)

    rows = format_matrix(results).splitlines()
    assert rows[0].split()[:2] == ["crit", "check"]
    assert rows[2].split()[:2] == ["1", "moyal"]
    assert rows[4].split()[:2] == ["-", "extra"]
    assert any("<Vf, Vg> = <f, g>" in row for row in rows)

    summary = summarize(results)
    assert summary["criteria"] == {"1": False}
    assert summary["results"][0]["formula"] == "<Vf, Vg> = <f, g>"
    assert summary["results"][0]["criterion"] == 1


def test_gt_structure_parts_report_their_own_residual():
    rng = np.random.default_rng(4)
    factorization, details = gt_structure(rng, draws=10, part="factorization")
    assert factorization == details["factorization"]
    assert factorization <= 1e-12
    symplectic, details = gt_structure(np.random.default_rng(4), draws=10, part="symplectic")
    assert symplectic == details["symplectic"] <= 1e-10
    with pytest.raises(ConfigError):
        gt_structure(rng, part="orthogonality")
