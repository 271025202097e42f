import pytest

from planepart.constants import constant_set
from planepart.sequence import PlCache

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def cache():
    """Exact PL(0..12000), shared by every test that only reads it."""
    return PlCache().require(12000)


@pytest.fixture(scope="session")
def ks2():
    return constant_set(2)


@pytest.fixture(scope="session")
def ks1():
    return constant_set(1)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
