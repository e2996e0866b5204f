import pytest

from scatterlab.gf import ctx_new
from scatterlab.seq import SequenceSpec

ACCEPTANCE_LINES = {}


@pytest.fixture(scope="session")
def f8():
    return ctx_new(2, 1, 3)


@pytest.fixture(scope="session")
def f64():
    return ctx_new(2, 1, 6)


@pytest.fixture(scope="session")
def reference(f8):
    return SequenceSpec(f8, 3, 1, 2, (1, 1, f8.x))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance")
    for name in sorted(ACCEPTANCE_LINES, key=lambda s: int(s[1:])):
        terminalreporter.write_line(ACCEPTANCE_LINES[name])
