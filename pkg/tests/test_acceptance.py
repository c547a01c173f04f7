"""Acceptance gate: every criterion at its stated tolerance, one line each."""

import pytest

from pulsar.acceptance import CRITERIA


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    result = CRITERIA[number]()
    print(result.line())
    assert result.passed, result.details
