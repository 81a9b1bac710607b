import sys

import numpy as np
import pytest

from optfprl.geometry import Ball, Box


@pytest.fixture
def ball2():
    return Ball(2.0, 2)


@pytest.fixture
def interval2():
    return Box([2.0])


def ones(d=16):
    return np.ones(d)


def pytest_terminal_summary(terminalreporter):
    mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    lines = getattr(mod, "LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
