import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dcsiting.economics import default_land_costs  # noqa: E402
from dcsiting.network import builtin_ieee33  # noqa: E402
from dcsiting.objective import Problem  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def ieee33():
    return builtin_ieee33()


@pytest.fixture(scope="session")
def econ():
    return default_land_costs(0)


@pytest.fixture(scope="session")
def problem(ieee33, econ):
    return Problem(ieee33, econ)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
