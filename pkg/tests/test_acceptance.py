"""Acceptance gate: one test per criterion, each printing its pass/fail line
and holding the stated runtime budget."""

import pytest

from bforge.reproduce import CRITERIA, GroupCache


@pytest.fixture(scope="module")
def cache():
    return GroupCache()


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda fn: fn.__name__)
def test_criterion(criterion, cache):
    result = criterion(cache)
    print(result.line())
    for line in result.details:
        print("   ", line)
    assert result.ok, "\n".join([result.line(), *result.details])
    assert result.elapsed_s < result.budget_s, (
        f"criterion {result.number} took {result.elapsed_s:.1f}s, budget {result.budget_s:.0f}s"
    )
