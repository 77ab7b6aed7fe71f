import sys

import pytest

from iplab.special_functions import BumpFunction, kelly_normalize


@pytest.fixture
def unit_bump():
    # unnormalized, as in the hand-checked values
    return BumpFunction(-1.0, 1.0, 1.0)


@pytest.fixture(scope="session")
def norm_bump():
    return kelly_normalize(-1.0, 1.0)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if not mod or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
