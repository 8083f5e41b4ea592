"""Experiment engine: single runs, probability sweeps, window statistics.

``run_single`` is the plain per-step loop built on the agent and
environment functions. ``run_sweep`` runs the same loop vectorized over
every (grid point, run) pair of one agent at a time; because each pair
draws from its own keyed substream, results do not depend on how pairs
are batched or how many worker processes share them.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .agents import (
    AvgQ,
    ExpectedUtility,
    Hyperparams,
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
    env_probability,
    reward_lookup,
    step,
)
from .games import Action, BimatrixGame, Player, derive_newcomb_view
from .rng import ENVIRONMENT, POLICY, RngStream

DEFAULT_WINDOW = 0.2
DEFAULT_MAX_TOTAL_STEPS = 10**9
BUDGET_ENV_VAR = "DILEMMA_MAX_TOTAL_STEPS"
METRICS = ("mean_payout", "repair_freq")
_CHUNK = 1024


class ConfigError(ValueError):
    pass


def max_total_steps() -> int:
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_TOTAL_STEPS
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{BUDGET_ENV_VAR} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ConfigError(f"{BUDGET_ENV_VAR} must be positive")
    return value


def window_length(steps: int, window: float) -> int:
    if not 0 < window <= 1:
        raise ConfigError(f"window must lie in (0, 1], got {window}")
    # round first so 0.2 * 10000 is 2000, not 2001
    return max(1, min(steps, math.ceil(round(window * steps, 9))))


def probability_grid(start: float, stop: float, step: float) -> Tuple[float, ...]:
    """Inclusive grid ``start, start+step, ..., stop``."""
    if step <= 0:
        raise ConfigError("grid step must be positive")
    if stop < start:
        raise ConfigError("grid stop must not be below start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(round(start + i * step, 12) for i in range(count))


@dataclass(frozen=True)
class EnvSpec:
    kind: str  # "newcomb" or "pd"
    game: BimatrixGame
    viewer: Player = Player.ROW

    def build(self, probability: float, mode: Optional[RewardMode] = None):
        if self.kind == "newcomb":
            return NewcombEnv(derive_newcomb_view(self.game, self.viewer), probability)
        return PdEnv(self.game, probability, mode or RewardMode.INDIVIDUAL)


@dataclass(frozen=True)
class AgentSpec:
    identifier: str
    mode: Optional[RewardMode] = None

    @property
    def label(self) -> str:
        if self.mode is None:
            return self.identifier
        return f"{self.identifier}-{self.mode.tag}"


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    env: EnvSpec
    roster: Tuple[AgentSpec, ...]
    params: Hyperparams = field(default_factory=Hyperparams)
    steps: int = 10000
    runs: int = 50
    grid: Tuple[float, ...] = field(default_factory=lambda: probability_grid(0.0, 1.0, 0.05))
    window: float = DEFAULT_WINDOW
    seed: int = 0
    metric: str = "mean_payout"

    def validate(self) -> "ExperimentConfig":
        if self.env.kind not in ("newcomb", "pd"):
            raise ConfigError(f"unknown environment {self.env.kind!r}")
        if not self.roster:
            raise ConfigError("agent roster is empty")
        if not self.grid:
            raise ConfigError("probability grid is empty")
        if any(not 0 <= p <= 1 for p in self.grid):
            raise ConfigError("grid probabilities must lie in [0, 1]")
        if self.steps <= 0 or self.runs <= 0:
            raise ConfigError("steps and runs must be positive")
        if not 0 < self.params.alpha <= 1:
            raise ConfigError("alpha must lie in (0, 1]")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.metric not in METRICS:
            raise ConfigError(f"metric must be one of {', '.join(METRICS)}")
        window_length(self.steps, self.window)
        labels = [a.label for a in self.roster]
        if len(set(labels)) != len(labels):
            raise ConfigError("duplicate agents in roster")
        for spec in self.roster:
            try:
                make_agent(spec.identifier, self.params, p=0.5, view=_dummy_view)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            if self.env.kind == "pd" and spec.identifier == "eu":
                raise ConfigError("the eu agent is defined for Newcomb environments only")
            if self.env.kind == "newcomb" and spec.mode is not None:
                raise ConfigError("reward modes apply to PD environments only")
        total = self.steps * self.runs * len(self.grid)
        budget = max_total_steps()
        if total > budget:
            raise ConfigError(f"steps*runs*grid = {total} exceeds budget {budget} ({BUDGET_ENV_VAR})")
        return self


_dummy_view = derive_newcomb_view(BimatrixGame(((0, 0), (0, 0)), ((0, 0), (0, 0))), Player.ROW)


@dataclass
class RunTrace:
    """Per-run record; ``actions``/``rewards`` are None when not retained."""

    steps: int
    window_len: int
    window_reward_sum: float
    window_repairs: int
    actions: Optional[np.ndarray] = None
    rewards: Optional[np.ndarray] = None

    @property
    def mean_payout(self) -> float:
        return self.window_reward_sum / self.window_len

    @property
    def repair_freq(self) -> float:
        return self.window_repairs / self.window_len


def run_single(agent, env, steps: int, rng: RngStream, window: float = DEFAULT_WINDOW,
               keep_trace: bool = True) -> RunTrace:
    if steps <= 0:
        raise ConfigError("steps must be positive")
    budget = max_total_steps()
    if steps > budget:
        raise ConfigError(f"{steps} steps exceed budget {budget} ({BUDGET_ENV_VAR})")
    wlen = window_length(steps, window)
    start = steps - wlen
    policy, env_rng = rng.child(POLICY), rng.child(ENVIRONMENT)
    actions = np.empty(steps, dtype=np.int8) if keep_trace else None
    rewards = np.empty(steps, dtype=float) if keep_trace else None

    qt = QTable()
    reward_sum, repairs = 0.0, 0
    a = select_action(agent, qt, policy)
    for t in range(steps):
        r = float(step(env, a, env_rng).reward)
        if keep_trace:
            actions[t] = a
            rewards[t] = r
        if t >= start:
            reward_sum += r
            repairs += a == Action.REPAIR
        if isinstance(agent, Sarsa):
            # on-policy: choose the next action before updating
            a_next = select_action(agent, qt, policy)
            qt = sarsa_update(qt, a, r, a_next, agent.params)
        else:
            if isinstance(agent, AvgQ):
                qt = avgq_update(qt, a, r)
            a_next = select_action(agent, qt, policy)
        a = a_next
    return RunTrace(steps, wlen, reward_sum, int(repairs), actions, rewards)


def aggregate_window(trace: RunTrace, window: float) -> Tuple[float, float]:
    """(mean payout, repair frequency) over the final ceil(window * N) steps."""
    wlen = window_length(trace.steps, window)
    if trace.rewards is None:
        if wlen != trace.window_len:
            raise ValueError("trace was not retained; only its own window is available")
        return trace.mean_payout, trace.repair_freq
    total = 0.0
    for r in trace.rewards[-wlen:].tolist():
        total += r
    repairs = int(np.count_nonzero(trace.actions[-wlen:] == Action.REPAIR))
    return total / wlen, repairs / wlen


@dataclass(frozen=True)
class SweepPoint:
    agent: str
    probability: float
    mean_payout: float
    payout_se: float
    repair_freq: float
    repair_se: float
    runs: int

    def value(self, metric: str) -> Tuple[float, float]:
        if metric == "mean_payout":
            return self.mean_payout, self.payout_se
        if metric == "repair_freq":
            return self.repair_freq, self.repair_se
        raise KeyError(metric)


@dataclass
class SweepResult:
    experiment: str
    steps: int
    window: float
    seed: int
    points: List[SweepPoint] = field(default_factory=list)

    @property
    def agents(self) -> List[str]:
        seen = []
        for p in self.points:
            if p.agent not in seen:
                seen.append(p.agent)
        return seen

    def series(self, agent: str) -> List[SweepPoint]:
        return sorted((p for p in self.points if p.agent == agent), key=lambda p: p.probability)

    def point(self, agent: str, probability: float) -> SweepPoint:
        for p in self.points:
            if p.agent == agent and math.isclose(p.probability, probability, abs_tol=1e-12):
                return p
        raise KeyError((agent, probability))


def _mean_se(values: np.ndarray) -> Tuple[float, float]:
    mean = float(np.mean(values))
    if len(values) < 2:
        return mean, 0.0
    return mean, float(np.std(values, ddof=1) / math.sqrt(len(values)))


class _Draws:
    """Row-by-row access to per-task uniform streams, refilled in chunks."""

    def __init__(self, streams: Sequence[RngStream], total_rows: int, width: Optional[int]):
        self.streams = streams
        self.total = total_rows
        self.width = width
        self.base = 0
        self.buf = None

    def row(self, t: int) -> np.ndarray:
        if self.buf is None or t >= self.base + self.buf.shape[1]:
            self.base = t
            m = min(_CHUNK, self.total - t)
            shape = (m,) if self.width is None else (m, self.width)
            self.buf = np.stack([s.block(shape) for s in self.streams])
        return self.buf[:, t - self.base]


def _batch_kernel(kind: str, params: Hyperparams, fixed: np.ndarray, probs: np.ndarray,
                  lookup: np.ndarray, prediction: bool, keys: Sequence[Tuple[int, int, int]],
                  seed: int, steps: int, wlen: int) -> Tuple[np.ndarray, np.ndarray]:
    """Window reward sums and repair counts for a batch of independent runs.

    ``fixed`` holds each task's action for non-learners (-1 means a fair
    coin every step); ``lookup[x, a]`` is the reward of own action ``a``
    against prediction/opponent action ``x``.
    """
    B = len(keys)
    runs = [RngStream(seed, key) for key in keys]
    policy = _Draws([r.child(POLICY) for r in runs], steps + 1, 2)
    envs = _Draws([r.child(ENVIRONMENT) for r in runs], steps, None)
    idx = np.arange(B)
    q = np.zeros((B, 2))
    n = np.zeros((B, 2), dtype=np.int64)
    eps, alpha, gamma = params.epsilon, params.alpha, params.gamma
    learner = kind in ("sarsa", "avgq")

    def decide(t):
        u = policy.row(t)
        coin = (u[:, 1] >= 0.5).astype(np.int64)
        if not learner:
            return np.where(fixed < 0, coin, fixed)
        greedy = np.where(q[:, 0] > q[:, 1], 0, np.where(q[:, 1] > q[:, 0], 1, coin))
        return np.where(u[:, 0] < eps, coin, greedy)

    start = steps - wlen
    reward_sum = np.zeros(B)
    repairs = np.zeros(B, dtype=np.int64)
    a = decide(0)
    for t in range(steps):
        hit = envs.row(t) < probs
        if prediction:
            x = np.where(hit, a, 1 - a)
        else:
            x = np.where(hit, 0, 1)
        r = lookup[x, a]
        if t >= start:
            reward_sum += r
            repairs += a == 0
        if kind == "sarsa":
            a_next = decide(t + 1)
            qa = q[idx, a]
            q[idx, a] = qa + alpha * (r + gamma * q[idx, a_next] - qa)
        else:
            if kind == "avgq":
                n[idx, a] += 1
                qa = q[idx, a]
                q[idx, a] = qa + (r - qa) / n[idx, a]
            a_next = decide(t + 1)
        a = a_next
    return reward_sum, repairs


@dataclass(frozen=True)
class _Unit:
    agent_index: int
    grid_indices: Tuple[int, ...]


def _run_unit(cfg: ExperimentConfig, unit: _Unit):
    spec = cfg.roster[unit.agent_index]
    wlen = window_length(cfg.steps, cfg.window)
    keys, probs, fixed = [], [], []
    lookup = None
    for g in unit.grid_indices:
        p = cfg.grid[g]
        env = cfg.env.build(p, spec.mode)
        lookup = reward_lookup(env)
        agent = make_agent(spec.identifier, cfg.params, p=p, view=getattr(env, "view", None))
        if isinstance(agent, ExpectedUtility):
            pref = -1 if agent.preferred is None else int(agent.preferred)
        elif spec.identifier == "always-repair":
            pref = int(Action.REPAIR)
        elif spec.identifier == "never-repair":
            pref = int(Action.NO_REPAIR)
        else:
            pref = -1
        for run in range(cfg.runs):
            keys.append((g, run, unit.agent_index))
            probs.append(env_probability(env))
            fixed.append(pref)
    sums, reps = _batch_kernel(
        spec.identifier, cfg.params, np.array(fixed, dtype=np.int64), np.array(probs), lookup,
        cfg.env.kind == "newcomb", keys, cfg.seed, cfg.steps, wlen,
    )
    out = {}
    for i, g in enumerate(unit.grid_indices):
        sl = slice(i * cfg.runs, (i + 1) * cfg.runs)
        out[g] = (sums[sl] / wlen, reps[sl] / wlen)
    return unit.agent_index, out


def run_sweep(cfg: ExperimentConfig, workers: int = 1) -> SweepResult:
    cfg.validate()
    if workers < 1:
        raise ConfigError("workers must be at least 1")
    ngrid = len(cfg.grid)
    chunks = np.array_split(np.arange(ngrid), min(workers, ngrid))
    units = [
        _Unit(i, tuple(int(g) for g in chunk))
        for i in range(len(cfg.roster))
        for chunk in chunks
    ]
    if workers == 1:
        outputs = [_run_unit(cfg, u) for u in units]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(_run_unit, [cfg] * len(units), units))

    per_agent = {}
    for agent_index, out in outputs:
        per_agent.setdefault(agent_index, {}).update(out)
    result = SweepResult(cfg.name, cfg.steps, cfg.window, cfg.seed)
    for i, spec in enumerate(cfg.roster):
        for g, p in enumerate(cfg.grid):
            payouts, freqs = per_agent[i][g]
            mp, mse = _mean_se(payouts)
            rf, rse = _mean_se(freqs)
            result.points.append(SweepPoint(spec.label, p, mp, mse, rf, rse, cfg.runs))
    return result


def run_stream(cfg: ExperimentConfig, agent_index: int, grid_index: int, run: int) -> RngStream:
    """The substream ``run_sweep`` uses for one (agent, grid point, run)."""
    return RngStream(cfg.seed, (grid_index, run, agent_index))
