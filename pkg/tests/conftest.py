import math

import pytest

from qgstrip.bands import dispersion, find_roots
from qgstrip.model import build_brick, build_rectangular

# reference band edges at theta = 0, three decimals
RECT_EDGES = [102.354, 102.949, 104.396, 104.991]
BRICK_EDGES = [101.133, 103.103, 104.046, 104.677]

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def rect3():
    return build_rectangular(3, 1.0, 1.0)


@pytest.fixture(scope="session")
def brick2():
    return build_brick(2, 1.0, 1.0, math.sqrt(2.0))


@pytest.fixture(scope="session")
def rect_roots(rect3):
    return find_roots(rect3, 0.0, 100.0, 107.0)


@pytest.fixture(scope="session")
def brick_roots(brick2):
    return find_roots(brick2, 0.0, 100.0, 107.0)


@pytest.fixture(scope="session")
def rect_bands(rect3):
    return dispersion(rect3, 24, 100.0, 107.0, exclusion_k=0.1, workers=4)


@pytest.fixture(scope="session")
def brick_bands(brick2):
    return dispersion(brick2, 24, 100.0, 107.0, exclusion_k=0.1, workers=4)


def nearest(roots, k):
    return min(roots, key=lambda r: abs(r - k))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
