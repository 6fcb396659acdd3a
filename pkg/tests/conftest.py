import sys
from fractions import Fraction

import pytest

from atvltd.config import Settings, set_settings
from atvltd.instances import five_node


@pytest.fixture(autouse=True)
def default_settings():
    set_settings(Settings())
    yield
    set_settings(Settings())


@pytest.fixture
def g5():
    return five_node()


def F(*values):
    return tuple(Fraction(v) for v in values)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
