import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

import acceptance_log  # noqa: E402
from nthsieve.characters import default_setup  # noqa: E402


@pytest.fixture(scope="session")
def st3():
    return default_setup(3)


@pytest.fixture(scope="session")
def st4():
    return default_setup(4)


@pytest.fixture(scope="session", params=[3, 4], ids=["n3", "n4"])
def st(request):
    return default_setup(request.param)


def pytest_terminal_summary(terminalreporter):
    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance_log.LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
