from __future__ import annotations

import sys

import pytest

from pcpsolve.pipeline import HStrategy, PCPProblem, first_row_matrix
from pcpsolve.poly import Ring

EXAMPLE_W = [0, -11616, -5324, -11228, -5247, 392, 78, 4, 1]


def example_problem() -> PCPProblem:
    R = Ring(("x1", "x2"))
    x1, x2 = R.gens()
    return PCPProblem((x2 - 1, x1 - 1))


def example_strategy() -> HStrategy:
    return HStrategy("explicit", explicit_matrix=first_row_matrix([1, 2, 3, 4, 5, 6]), invert_convention=False)


def circle_problem() -> PCPProblem:
    R = Ring(("x1", "x2"))
    x1, x2 = R.gens()
    c = x1**2 + x2**2 - 1
    return PCPProblem((c, c))


@pytest.fixture
def r2():
    return Ring(("x1", "x2"))


@pytest.fixture
def r1():
    return Ring(("x1",))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
