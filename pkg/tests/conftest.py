import numpy as np
import pytest

from rads.config import paper_default
from rads.model import mhz_to_angular

G_MHZ = 13.5
G_ANG = float(mhz_to_angular(G_MHZ))

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def device():
    return paper_default()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
