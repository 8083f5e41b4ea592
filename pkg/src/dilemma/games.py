"""Two-action games: PD structure checks, Newcomb views, expected utility.

Payoffs are stored as signed values, so a regret of 2000 is the payoff
``-2000`` and every agent maximizes.
"""

from __future__ import annotations

import enum
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

Number = Union[int, float, Fraction]

FLOAT_TOL = 1e-12


class Action(enum.IntEnum):
    REPAIR = 0
    NO_REPAIR = 1

    def other(self) -> "Action":
        return Action(1 - self)

    @property
    def label(self) -> str:
        return "repair" if self is Action.REPAIR else "norepair"


class Player(enum.IntEnum):
    ROW = 0
    COL = 1

    def opponent(self) -> "Player":
        return Player(1 - self)


ACTIONS = (Action.REPAIR, Action.NO_REPAIR)

Table = Tuple[Tuple[Number, Number], Tuple[Number, Number]]


class AlwaysIndifferent(ValueError):
    """Raised when both actions have equal expected utility for every p."""


def _check_finite(*values: Number) -> None:
    for v in values:
        if not isinstance(v, numbers.Real) or not math.isfinite(v):
            raise ValueError(f"payoff must be a finite real number, got {v!r}")


def _table(cells) -> Table:
    (a, b), (c, d) = cells
    _check_finite(a, b, c, d)
    return ((a, b), (c, d))


@dataclass(frozen=True)
class PdParams:
    T: Number
    R: Number
    P: Number
    S: Number


@dataclass(frozen=True)
class BimatrixGame:
    """2x2 game; ``row[a][b]`` and ``col[a][b]`` are indexed by (row action, col action)."""

    row: Table
    col: Table

    def __post_init__(self):
        object.__setattr__(self, "row", _table(self.row))
        object.__setattr__(self, "col", _table(self.col))

    def payoff(self, player: Player, row_action: Action, col_action: Action) -> Number:
        table = self.row if player is Player.ROW else self.col
        return table[row_action][col_action]

    def symmetric(self) -> bool:
        return all(self.row[a][b] == self.col[b][a] for a in ACTIONS for b in ACTIONS)


@dataclass(frozen=True)
class NewcombView:
    """One player's payoffs indexed by ``cells[prediction][own_action]``.

    ``prediction`` is the opponent's action relabeled as a forecast.
    """

    cells: Table

    def __post_init__(self):
        object.__setattr__(self, "cells", _table(self.cells))

    def payoff(self, prediction: Action, own_action: Action) -> Number:
        return self.cells[prediction][own_action]


def check_pd_conditions(p: PdParams) -> bool:
    """True iff ``T > R > P > S`` and ``R > (T + S) / 2``."""
    _check_finite(p.T, p.R, p.P, p.S)
    return p.T > p.R > p.P > p.S and 2 * p.R > p.T + p.S


def make_pd_game(p: PdParams) -> BimatrixGame:
    row = ((p.R, p.S), (p.T, p.P))
    col = ((p.R, p.T), (p.S, p.P))
    return BimatrixGame(row, col)


def derive_newcomb_view(g: BimatrixGame, viewer: Player) -> NewcombView:
    if viewer is Player.ROW:
        cells = tuple(tuple(g.row[own][pred] for own in ACTIONS) for pred in ACTIONS)
    else:
        cells = tuple(tuple(g.col[pred][own] for own in ACTIONS) for pred in ACTIONS)
    return NewcombView(cells)


def check_probability(p: Number) -> None:
    if not isinstance(p, numbers.Real) or not (0 <= p <= 1):
        raise ValueError(f"probability must lie in [0, 1], got {p!r}")


def expected_utility(v: NewcombView, a: Action, p: Number) -> Number:
    """Expected payoff of ``a`` when the prediction matches it with probability ``p``."""
    check_probability(p)
    a = Action(a)
    return p * v.cells[a][a] + (1 - p) * v.cells[a.other()][a]


def _is_exact(*values) -> bool:
    return all(isinstance(x, numbers.Rational) for x in values)


def eu_threshold(v: NewcombView) -> Optional[Number]:
    """Accuracy at which Repair and NoRepair have equal expected utility.

    Returns a ``Fraction`` when all cells are rational, otherwise a float.
    Returns None if one action is better on the whole of [0, 1]; raises
    :class:`AlwaysIndifferent` if the two are tied everywhere.
    """
    c = v.cells
    R, N = Action.REPAIR, Action.NO_REPAIR
    # EU(Repair) - EU(NoRepair) is linear in p: d0 at p=0, d1 at p=1
    d0 = c[N][R] - c[R][N]
    d1 = c[R][R] - c[N][N]
    if _is_exact(d0, d1):
        d0, d1 = Fraction(d0), Fraction(d1)
        if d0 == 0 and d1 == 0:
            raise AlwaysIndifferent("expected utilities coincide for every p")
        if d0 * d1 > 0:
            return None
        return d0 / (d0 - d1)

    d0, d1 = float(d0), float(d1)
    scale = max(abs(x) for row in c for x in row) or 1.0
    tol = FLOAT_TOL * scale
    if abs(d0) <= tol and abs(d1) <= tol:
        raise AlwaysIndifferent("expected utilities coincide for every p")
    if abs(d0) <= tol:
        return 0.0
    if abs(d1) <= tol:
        return 1.0
    if d0 * d1 > 0:
        return None
    return d0 / (d0 - d1)


def dominant_action(v: NewcombView) -> Optional[Action]:
    """Action strictly better than the other under both predictions, if any."""
    for a in ACTIONS:
        b = a.other()
        if all(v.cells[pred][a] > v.cells[pred][b] for pred in ACTIONS):
            return a
    return None


# robot-robot oil spill regrets
OIL_SPILL_PD = PdParams(T=-1000, R=-2000, P=-3000, S=-4000)

# robot (row) vs human (col); the human's lone repair costs -1000000
ROBOT_HUMAN_GAME = BimatrixGame(
    row=((-2000, -4000), (-1000, -3000)),
    col=((-2000, -1000), (-1000000, -3000)),
)
