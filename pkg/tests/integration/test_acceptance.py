#!/usr/bin/env python3
"""
End-to-end run of the acceptance catalogue: every identity check must pass
with the default seed in deterministic mode.
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

import pytest

from gabortorus.verification import format_matrix, get_default_runner, summarize


@pytest.fixture(scope="module")
def results():
    return get_default_runner().run_all(seed=0, deterministic=True)


def test_every_check_passes(results):
    failed = [r for r in results if not r.passed]
    assert not failed, format_matrix(results)


def test_every_identity_is_covered(results):
    summary = summarize(results)
    assert set(summary["identities"]) == {
        "moyal",
        "figa",
        "janssen",
        "associativity",
        "representation",
        "gaussian",
        "theta",
        "invertibility",
        "reconstruction",
        "poisson",
        "wigner",
        "bimodule",
    }
    assert summary["passed"] is True
    assert summary["criteria"] == {str(n): True for n in range(1, 11)}


def test_invertibility_frontier_details(results):
    frontier = next(r for r in results if r.check_id == "invertibility-frontier")
    assert frontier.residual == 0
    verdicts = {row["ab"]: row["verdict"] for row in frontier.details["sweep"]}
    assert verdicts[0.49] == "invertible"
    assert verdicts[1.0] == "not-invertible"
    assert verdicts[1.21] == "not-invertible"
