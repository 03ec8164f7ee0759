"""Acceptance criteria, one test per check.

Each check's pass/fail line is printed; a per-criterion summary is added to
the terminal report by conftest.py.
"""

import pytest

from zfr.acceptance import CHECKS, CheckResult, Context

RESULTS: list[CheckResult] = []


@pytest.fixture(scope="module")
def ctx():
    return Context()


def _id(check):
    crit, name, _ = check
    tag = f"c{crit}" if crit is not None else "ex"
    return f"{tag}-{name}".replace(" ", "_")


@pytest.mark.parametrize("check", CHECKS, ids=[_id(c) for c in CHECKS])
def test_criterion(ctx, check):
    crit, name, fn = check
    ok, detail = fn(ctx)
    result = CheckResult(crit, name, bool(ok), detail)
    RESULTS.append(result)
    print(result.line())
    assert result.passed, result.line()
