import numpy as np
import pytest

from stableproj.spectral import DiscreteSpectralMeasure

#: lines recorded by test_acceptance.py, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []

ASYM_POINTS = np.array([[1.0, 0.0], [0.0, 1.0], [-0.6, 0.8], [0.28, -0.96]])
ASYM_WEIGHTS = np.array([1.0, 0.5, 0.3, 0.7])


@pytest.fixture
def asym_measure():
    def make(alpha, shift=(0.3, -0.2), rep="A"):
        return DiscreteSpectralMeasure(ASYM_POINTS, ASYM_WEIGHTS, alpha, np.array(shift), rep)
    return make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
