"""Experiment presets reproducing the published figures.

Newcomb presets use the robot/human oil-spill game seen from the robot;
PD presets use the symmetric robot/robot oil-spill game. All run 10000
steps, 50 runs, grid 0..1 step 0.05, alpha=0.1, gamma=0.9, epsilon=0.1.
"""

from __future__ import annotations

from .agents import Hyperparams
from .environments import RewardMode
from .games import OIL_SPILL_PD, ROBOT_HUMAN_GAME, Player, make_pd_game
from .simulation import AgentSpec, ConfigError, EnvSpec, ExperimentConfig

NEWCOMB_ROBOT = EnvSpec("newcomb", ROBOT_HUMAN_GAME, Player.ROW)
PD = EnvSpec("pd", make_pd_game(OIL_SPILL_PD))

BASELINES = ("always-repair", "never-repair")
I, T = RewardMode.INDIVIDUAL, RewardMode.SUM

_PRESETS = {
    "fig1a": (NEWCOMB_ROBOT, [AgentSpec(a) for a in BASELINES], "mean_payout"),
    "fig1b": (NEWCOMB_ROBOT, [AgentSpec(a) for a in ("sarsa", "avgq", "eu")], "repair_freq"),
    "fig1c": (NEWCOMB_ROBOT, [AgentSpec(a) for a in ("sarsa", "avgq", "eu")], "mean_payout"),
    "fig2a": (PD, [AgentSpec(a, I) for a in BASELINES], "mean_payout"),
    "fig2b": (PD, [AgentSpec(a, T) for a in BASELINES], "mean_payout"),
    "fig2c": (PD, [AgentSpec(a, m) for a in ("sarsa", "avgq") for m in (I, T)], "mean_payout"),
}

PRESET_NAMES = tuple(_PRESETS)


def figure_preset(name: str, seed: int = 0) -> ExperimentConfig:
    try:
        env, roster, metric = _PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; expected one of {', '.join(PRESET_NAMES)}") from None
    return ExperimentConfig(
        name=name,
        env=env,
        roster=tuple(roster),
        params=Hyperparams(alpha=0.1, gamma=0.9, epsilon=0.1),
        steps=10000,
        runs=50,
        seed=seed,
        metric=metric,
    ).validate()
