from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=80, deadline=None)
settings.load_profile("default")


@pytest.fixture
def eps100():
    return Fraction(1, 100)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
