"""Acceptance criteria 1-11.  Each test prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` or as a script.
"""

import sys

import pytest

from adeliceis.acceptance import CRITERIA, integrality, run_criterion
from adeliceis.config import EngineConfig

CFG = EngineConfig()
# seconds; criteria without a stated budget are unbounded
BUDGET = {1: 120, 2: 10, 3: 60, 7: 300}
_results: dict = {}


def _report(capsys, res, budget=None):
    line = res.line()
    if budget is not None:
        line += f" [budget {budget}s: {'ok' if res.seconds <= budget else 'exceeded'}]"
    with capsys.disabled():
        print("\n" + line)


def _get(number):
    if number not in _results:
        _results[number] = run_criterion(number, CFG)
    return _results[number]


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    res = _get(number)
    budget = BUDGET.get(number)
    _report(capsys, res, budget)
    assert res.passed, res.detail
    if budget is not None:
        assert res.seconds <= budget, f"took {res.seconds:.1f}s"


def test_criterion_8_integrality(capsys):
    res = integrality([_get(n) for n in (4, 5, 6, 7)])
    _report(capsys, res)
    assert res.passed, res.detail


if __name__ == "__main__":
    from adeliceis.acceptance import run_all
    results = run_all(CFG)
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
