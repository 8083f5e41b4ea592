import pytest

from dilemma.games import (
    OIL_SPILL_PD,
    ROBOT_HUMAN_GAME,
    Player,
    derive_newcomb_view,
    make_pd_game,
)


@pytest.fixture
def table1():
    return make_pd_game(OIL_SPILL_PD)


@pytest.fixture
def table2():
    return ROBOT_HUMAN_GAME


@pytest.fixture
def robot_view():
    return derive_newcomb_view(ROBOT_HUMAN_GAME, Player.ROW)


@pytest.fixture
def human_view():
    return derive_newcomb_view(ROBOT_HUMAN_GAME, Player.COL)


class Feed:
    """Stand-in stream that replays given uniforms through ``random()``."""

    def __init__(self, values):
        self._it = iter(values)
        self.used = 0

    def random(self):
        self.used += 1
        return float(next(self._it))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
