import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from eulerkit.engine import build_euler_table  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def table():
    return build_euler_table(64)


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
