import os

import pytest
from hypothesis import HealthCheck, settings

from invol2.field import FieldCtx
from invol2.suite import Instances

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def inst():
    return Instances(seed=0)


@pytest.fixture(scope="session")
def Fxy():
    return FieldCtx(("x", "y"))


@pytest.fixture(scope="session")
def Fxyz():
    return FieldCtx(("x", "y", "z"))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for r in sorted(RESULTS, key=lambda r: r.number):
            terminalreporter.write_line(r.line())
