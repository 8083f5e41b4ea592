"""Single-step stochastic environments.

Both environments draw exactly one uniform per step. The Newcomb
predictor matches the learner's current action with probability
``accuracy``; the PD opponent repairs with probability ``coop_prob``
independently of the learner and of earlier steps. The learner is always
the row player of a PD game.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .games import (
    ACTIONS,
    Action,
    BimatrixGame,
    NewcombView,
    Player,
    check_probability,
    expected_utility,
)


class RewardMode(enum.Enum):
    INDIVIDUAL = "individual"
    SUM = "sum"

    @property
    def tag(self) -> str:
        return "I" if self is RewardMode.INDIVIDUAL else "T"


@dataclass(frozen=True)
class NewcombEnv:
    view: NewcombView
    accuracy: float

    def __post_init__(self):
        check_probability(self.accuracy)


@dataclass(frozen=True)
class PdEnv:
    game: BimatrixGame
    coop_prob: float
    mode: RewardMode = RewardMode.INDIVIDUAL

    def __post_init__(self):
        check_probability(self.coop_prob)

    def reward(self, a: Action, b: Action):
        own = self.game.payoff(Player.ROW, a, b)
        if self.mode is RewardMode.SUM:
            return own + self.game.payoff(Player.COL, a, b)
        return own


Environment = Union[NewcombEnv, PdEnv]


@dataclass(frozen=True)
class StepOutcome:
    reward: float
    own_action: Action
    # the prediction (Newcomb) or the opponent's move (PD)
    other_or_prediction: Action
    # (learner, opponent); Newcomb has no opponent payoff so the second is None
    individual_payoffs: Tuple[float, Optional[float]]


def newcomb_step(env: NewcombEnv, a: Action, rng) -> StepOutcome:
    a = Action(a)
    prediction = a if rng.random() < env.accuracy else a.other()
    reward = env.view.payoff(prediction, a)
    return StepOutcome(reward, a, prediction, (reward, None))


def pd_step(env: PdEnv, a: Action, rng) -> StepOutcome:
    a = Action(a)
    b = Action.REPAIR if rng.random() < env.coop_prob else Action.NO_REPAIR
    payoffs = (env.game.payoff(Player.ROW, a, b), env.game.payoff(Player.COL, a, b))
    return StepOutcome(env.reward(a, b), a, b, payoffs)


def step(env: Environment, a: Action, rng) -> StepOutcome:
    if isinstance(env, NewcombEnv):
        return newcomb_step(env, a, rng)
    return pd_step(env, a, rng)


def analytic_mean_reward(env: Environment, a: Action):
    """Exact expected reward of always playing ``a``."""
    a = Action(a)
    if isinstance(env, NewcombEnv):
        return expected_utility(env.view, a, env.accuracy)
    q = env.coop_prob
    return q * env.reward(a, Action.REPAIR) + (1 - q) * env.reward(a, Action.NO_REPAIR)


def reward_lookup(env: Environment) -> np.ndarray:
    """Rewards as a float array indexed ``[other_or_prediction][own_action]``."""
    if isinstance(env, NewcombEnv):
        cells = [[env.view.payoff(x, a) for a in ACTIONS] for x in ACTIONS]
    else:
        cells = [[env.reward(a, x) for a in ACTIONS] for x in ACTIONS]
    return np.array(cells, dtype=float)


def env_probability(env: Environment) -> float:
    return env.accuracy if isinstance(env, NewcombEnv) else env.coop_prob
