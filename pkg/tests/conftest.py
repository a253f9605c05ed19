import numpy as np
import pytest

from spinform import ConstantField, PhysicalParams

# (criterion number, line) pairs filled by test_acceptance.py, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def zfield():
    return ConstantField([0.0, 0.0, 1.0])


@pytest.fixture
def unit_params():
    return PhysicalParams(gamma=1.0, hbar=1.0, k_i=0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
