from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def F(*xs):
    """Shorthand for exact rational vectors: F(1, "1/3") -> (Fraction(1), Fraction(1, 3))."""
    return tuple(Fraction(x) for x in xs)


GL4_NUS = [F(1, 1, 0, 0), F(1, "1/2", "1/2", 0), F(1, "1/3", "1/3", "1/3"),
            F("2/3", "2/3", "2/3", 0), F("1/2", "1/2", "1/2", "1/2")]


@pytest.fixture(scope="session")
def gl4_poset():
    from newtonstrata import enumerate_bg_mu, preset
    return enumerate_bg_mu(preset("gl", 4), (1, 1, 0, 0))


# one line per acceptance criterion, shown in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
