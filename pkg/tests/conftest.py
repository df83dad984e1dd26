import sys

import numpy as np
import pytest

from isoresonance.potential import BumpSum, BumpTerm, SquareWell


@pytest.fixture
def well():
    return SquareWell(1.0, 1, -10.0, 1.0)


@pytest.fixture
def smooth_bump():
    return BumpSum(1.0, 1, (BumpTerm(1.0, 0.0, 1.0),))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        terminalreporter.write_line(results[num])
