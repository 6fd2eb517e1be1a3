"""Acceptance gate: every criterion at its stated tolerance.

Each test runs one criterion and prints its pass/fail line; the suite is
what `cxpt verify --suite all` executes.
"""

import pytest

from cxpt.acceptance import CRITERIA, run_acceptance


@pytest.mark.parametrize("cid", sorted(CRITERIA))
def test_criterion(cid):
    (result,) = run_acceptance([cid])
    print(result.line())
    assert result.passed, f"criterion {cid} failed: {result.details}"
