import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rackrepair.gf_tower import make_field  # noqa: E402


@pytest.fixture(scope="session")
def F4():
    return make_field(2, 2)


@pytest.fixture(scope="session")
def F16():
    return make_field(2, 4)


@pytest.fixture(scope="session")
def F64():
    return make_field(2, 6)


@pytest.fixture(scope="session")
def F81():
    return make_field(3, 4)


@pytest.fixture(scope="session")
def F9():
    return make_field(3, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


# one status line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES, key=lambda k: int(k[1:])):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
