"""Acceptance gate: one test per criterion, each printing its PASS/FAIL line."""

import pytest

from wavepole import validation

KEYS = ["1", "2", "3", "4a", "4b", "5a", "5b", "5c", "5d", "6a", "6a'", "6b", "6c", "6d", "7", "8", "9"]


@pytest.fixture(scope="module")
def results():
    return {r.key: r for r in validation.run_all()}


def test_every_criterion_is_reported(results):
    assert sorted(results) == sorted(KEYS)


@pytest.mark.parametrize("key", KEYS)
def test_criterion(key, results, capsys):
    res = results[key]
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.detail
