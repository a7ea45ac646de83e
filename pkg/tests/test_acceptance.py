"""Acceptance suite: every numbered cross-validation check must pass.

Each criterion runs through the same registry the `pumpedcat validate`
command uses, budget enforcement included, and reports its one-line
verdict. Run with -v to get one pass/fail line per criterion.
"""
import pytest

from pumpedcat.validation import CRITERIA, format_report, run_criteria

_IDS = [f"{num:02d} {name}" for num, name, _ in CRITERIA]


@pytest.mark.parametrize("number", [num for num, _, _ in CRITERIA], ids=_IDS)
def test_criterion(number):
    result = run_criteria([number])[0]
    line = format_report([result]).splitlines()[0]
    print(line)
    assert result.passed, line
