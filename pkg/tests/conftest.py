import numpy as np
import pytest

from sudostats import get_board

from helpers import VERDICTS
from helpers import oracle as _oracle


@pytest.fixture(scope="session")
def board4():
    return get_board(2)


@pytest.fixture(scope="session")
def board9():
    return get_board(3)


@pytest.fixture(scope="session")
def oracle():
    return _oracle()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS, key=lambda v: int(v.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
