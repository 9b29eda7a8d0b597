"""Acceptance gate: every primary criterion at its stated tolerance.

Each check prints one PASS/FAIL line; the lines are also repeated in the
terminal summary so they appear even when output is captured.
"""
import pytest

from mixconc.suites import ACCEPTANCE

RESULTS: list = []


@pytest.mark.parametrize("check", ACCEPTANCE, ids=[c.__name__ for c in ACCEPTANCE])
def test_acceptance(check):
    result = check()
    RESULTS.append(result.line())
    print(result.line())
    assert result.passed, result.detail


def test_acceptance_covers_eleven_criteria():
    assert len(ACCEPTANCE) == 11
