from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from planar_ising import corpus

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def standard():
    return corpus.standard_corpus()


@pytest.fixture(scope="session")
def half_weights():
    return corpus.standard_corpus(Fraction(1, 2))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
