import pytest

from sewcalc.branes import BraneContext


@pytest.fixture
def ctx4():
    """Ambient dimension 4 with a handful of branes of mixed dimension."""
    return BraneContext.build(4, {"I": 2, "J": 3, "K": 3, "L": 3, "Q": 2, "R": 2})


@pytest.fixture
def disc_ctx():
    return BraneContext.build(4, {f"K{i}": 3 for i in range(1, 7)})


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
