"""Bandit learners facing Newcomb's Problem and skewed Prisoner's Dilemmas."""

from .agents import (
    AlwaysRepair,
    AvgQ,
    ExpectedUtility,
    Hyperparams,
    NeverRepair,
    QTable,
    Sarsa,
    avgq_update,
    make_agent,
    sarsa_update,
    select_action,
)
from .environments import (
    NewcombEnv,
    PdEnv,
    RewardMode,
    StepOutcome,
    analytic_mean_reward,
    newcomb_step,
    pd_step,
)
from .gamefile import load_game, parse_game
from .games import (
    OIL_SPILL_PD,
    ROBOT_HUMAN_GAME,
    Action,
    AlwaysIndifferent,
    BimatrixGame,
    NewcombView,
    PdParams,
    Player,
    check_pd_conditions,
    derive_newcomb_view,
    dominant_action,
    eu_threshold,
    expected_utility,
    make_pd_game,
)
from .presets import figure_preset
from .results import emit_csv, read_csv
from .rng import RngStream
from .simulation import (
    AgentSpec,
    ConfigError,
    EnvSpec,
    ExperimentConfig,
    SweepResult,
    aggregate_window,
    run_single,
    run_sweep,
)
from .svg import render_svg

__version__ = "0.1.0"
