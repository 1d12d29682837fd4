from pathlib import Path

import pytest

from coordplan.coordspace import CollisionRect, CoordinationScenario

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

SQUARE = (0.4, 0.6)

ACCEPTANCE_LINES = []


def square_pair(x_init=(0.0, 0.0)):
    return CoordinationScenario(2, (CollisionRect((1, 2), SQUARE, SQUARE),), x_init)


def common_point():
    rects = tuple(CollisionRect(p, SQUARE, SQUARE) for p in ((1, 2), (1, 3), (2, 3)))
    return CoordinationScenario(3, rects, (0.0, 0.0, 0.0))


def staggered():
    # (1,2): s_1 in (0.2,0.3), s_2 in (0.7,0.8); (2,3) likewise; (3,1): s_3 low, s_1 high
    rects = (
        CollisionRect((1, 2), (0.2, 0.3), (0.7, 0.8)),
        CollisionRect((2, 3), (0.2, 0.3), (0.7, 0.8)),
        CollisionRect((1, 3), (0.7, 0.8), (0.2, 0.3)),
    )
    return CoordinationScenario(3, rects, (0.0, 0.0, 0.0))


def three_path_priorities():
    rects = (
        CollisionRect((1, 2), (0.3, 0.5), (0.35, 0.55)),
        CollisionRect((1, 3), (0.55, 0.7), (0.25, 0.4)),
        CollisionRect((2, 3), (0.6, 0.75), (0.5, 0.65)),
    )
    return CoordinationScenario(3, rects, (0.0, 0.0, 0.0))


def free_scenario(n):
    return CoordinationScenario(n, (), (0.0,) * n)


@pytest.fixture
def scenarios_dir():
    return SCENARIOS


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
