"""Acceptance criteria, one line each; the full run includes the determinism rerun."""

import pytest

from bicorn.suite import CRITERIA, DETERMINISM, SuiteConfig, run_suite

NUMBERS = [c[0] for c in CRITERIA] + [DETERMINISM[0]]


@pytest.fixture(scope="module")
def results():
    return {r.number: r for r in run_suite(SuiteConfig())}


def test_report(results, capsys):
    with capsys.disabled():
        print()
        for n in NUMBERS:
            print(results[n].line())
    assert sorted(results) == NUMBERS


@pytest.mark.parametrize("number", NUMBERS)
def test_criterion(results, number):
    r = results[number]
    assert r.passed, r.line()
