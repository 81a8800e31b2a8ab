"""Acceptance criteria 1-10, one test each.

Each criterion prints one PASS/FAIL line; the lines are repeated in the
terminal summary.  Run directly with ``python3 tests/test_acceptance.py``.
"""

import pytest

from invol2.suite import CRITERIA, Instances, run_criterion

RESULTS = []


@pytest.fixture(scope="module")
def instances():
    return Instances(seed=0)


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number, instances):
    result = run_criterion(number, instances)
    RESULTS.append(result)
    print(result.line())
    assert result.passed, result.detail


if __name__ == "__main__":
    inst = Instances(seed=0)
    for number, *_ in CRITERIA:
        print(run_criterion(number, inst).line(), flush=True)
