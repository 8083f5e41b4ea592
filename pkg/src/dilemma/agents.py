"""Decision agents for the two-armed bandit.

Learners keep one value per action (no state, the bandit has a single
state). Values start at zero; with all-negative payoffs that is an
optimistic start, so both arms get tried early on.

Every agent consumes exactly two uniforms per decision from its policy
stream (explore coin, then choice/tie-break), including agents that
ignore them. That keeps draw counts identical across agent kinds.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Optional, Tuple, Union

from .games import Action, NewcombView, expected_utility


@dataclass(frozen=True)
class Hyperparams:
    alpha: float = 0.1
    gamma: float = 0.9
    epsilon: float = 0.1

    def __post_init__(self):
        for name in ("alpha", "gamma", "epsilon"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class QTable:
    q: Tuple[float, float] = (0.0, 0.0)
    n: Tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Sarsa:
    params: Hyperparams = field(default_factory=Hyperparams)
    identifier = "sarsa"
    learns = True

    @property
    def epsilon(self) -> float:
        return self.params.epsilon


@dataclass(frozen=True)
class AvgQ:
    epsilon: float = 0.1
    identifier = "avgq"
    learns = True

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")


@dataclass(frozen=True)
class ExpectedUtility:
    """Oracle that is handed the true prediction accuracy ``p``."""

    p: float
    view: NewcombView
    identifier = "eu"
    learns = False

    @cached_property
    def preferred(self) -> Optional[Action]:
        """Action with the higher expected utility, None on a tie."""
        p = Fraction(self.p)
        rep = expected_utility(self.view, Action.REPAIR, p)
        norep = expected_utility(self.view, Action.NO_REPAIR, p)
        if rep == norep:
            return None
        return Action.REPAIR if rep > norep else Action.NO_REPAIR


@dataclass(frozen=True)
class AlwaysRepair:
    identifier = "always-repair"
    learns = False


@dataclass(frozen=True)
class NeverRepair:
    identifier = "never-repair"
    learns = False


Agent = Union[Sarsa, AvgQ, ExpectedUtility, AlwaysRepair, NeverRepair]

AGENT_IDS = ("sarsa", "avgq", "eu", "always-repair", "never-repair")


def make_agent(identifier: str, params: Hyperparams = Hyperparams(), p=None, view=None) -> Agent:
    if identifier == "sarsa":
        return Sarsa(params)
    if identifier == "avgq":
        return AvgQ(params.epsilon)
    if identifier == "eu":
        if p is None or view is None:
            raise ValueError("the eu agent needs the true accuracy p and a Newcomb view")
        return ExpectedUtility(p, view)
    if identifier == "always-repair":
        return AlwaysRepair()
    if identifier == "never-repair":
        return NeverRepair()
    raise ValueError(f"unknown agent {identifier!r}; expected one of {', '.join(AGENT_IDS)}")


def _coin(u: float) -> Action:
    return Action.REPAIR if u < 0.5 else Action.NO_REPAIR


def epsilon_greedy(q, epsilon: float, u_explore: float, u_choice: float) -> Action:
    """Greedy on ``q`` except with probability ``epsilon``; ties and exploration are fair coins."""
    if u_explore < epsilon:
        return _coin(u_choice)
    if q[Action.REPAIR] > q[Action.NO_REPAIR]:
        return Action.REPAIR
    if q[Action.NO_REPAIR] > q[Action.REPAIR]:
        return Action.NO_REPAIR
    return _coin(u_choice)


def select_action(agent: Agent, qt: QTable, rng) -> Action:
    u_explore = rng.random()
    u_choice = rng.random()
    if isinstance(agent, (Sarsa, AvgQ)):
        return epsilon_greedy(qt.q, agent.epsilon, u_explore, u_choice)
    if isinstance(agent, ExpectedUtility):
        best = agent.preferred
        return _coin(u_choice) if best is None else best
    if isinstance(agent, AlwaysRepair):
        return Action.REPAIR
    if isinstance(agent, NeverRepair):
        return Action.NO_REPAIR
    raise TypeError(f"not an agent: {agent!r}")


def _set(pair, index, value):
    out = list(pair)
    out[index] = value
    return tuple(out)


def sarsa_update(qt: QTable, a: Action, r: float, a_next: Action, h: Hyperparams) -> QTable:
    qa = qt.q[a]
    qa = qa + h.alpha * (r + h.gamma * qt.q[a_next] - qa)
    return replace(qt, q=_set(qt.q, a, qa), n=_set(qt.n, a, qt.n[a] + 1))


def avgq_update(qt: QTable, a: Action, r: float) -> QTable:
    n = qt.n[a] + 1
    qa = qt.q[a]
    qa = r if n == 1 else qa + (r - qa) / n
    return replace(qt, q=_set(qt.q, a, qa), n=_set(qt.n, a, n))
