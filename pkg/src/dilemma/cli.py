"""Command line front end.

    dilemma check --pd T,R,P,S
    dilemma analyze --game table2.game
    dilemma newcomb --view robot --agents sarsa,avgq,eu --out fig.csv --svg fig.svg
    dilemma pd --mode individual,sum --agents sarsa,avgq
    dilemma newcomb --preset fig1b

Exit status: 0 on success, 2 on bad arguments or configuration, 1 when
an output file cannot be written.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from typing import List, Optional

from .agents import AGENT_IDS, Hyperparams
from .environments import RewardMode
from .gamefile import GameFileError, load_game
from .games import (
    ACTIONS,
    OIL_SPILL_PD,
    ROBOT_HUMAN_GAME,
    AlwaysIndifferent,
    PdParams,
    Player,
    check_pd_conditions,
    derive_newcomb_view,
    dominant_action,
    eu_threshold,
    make_pd_game,
)
from .presets import PRESET_NAMES, figure_preset
from .results import emit_csv, write_csv
from .simulation import (
    DEFAULT_WINDOW,
    AgentSpec,
    ConfigError,
    EnvSpec,
    ExperimentConfig,
    probability_grid,
    run_sweep,
)
from .svg import render_svg

log = logging.getLogger("dilemma")

VIEWERS = {"robot": Player.ROW, "human": Player.COL}
METRIC_KIND = {"payout": "mean_payout", "action": "repair_freq"}
KIND_OF_METRIC = {v: k for k, v in METRIC_KIND.items()}


def _numbers(text: str) -> List[Fraction]:
    try:
        return [Fraction(part.strip()) for part in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _grid(text: str):
    try:
        start, stop, step = (float(x) for x in text.split(":"))
        return probability_grid(start, stop, step)
    except (ValueError, ConfigError) as exc:
        raise argparse.ArgumentTypeError(f"bad --p-grid {text!r}: {exc}") from None


def _csv_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dilemma", description="Newcomb and Prisoner's Dilemma bandit experiments")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="validate a PD and report its Newcomb threshold")
    src = check.add_mutually_exclusive_group(required=True)
    src.add_argument("--pd", type=_numbers, metavar="T,R,P,S")
    src.add_argument("--game", metavar="FILE")

    analyze = sub.add_parser("analyze", help="Newcomb views, dominance and thresholds of a game")
    analyze.add_argument("--game", metavar="FILE", help="game file (default: robot/human oil spill)")

    for name in ("newcomb", "pd"):
        p = sub.add_parser(name, help=f"sweep agents over a {name} environment")
        p.add_argument("--preset", choices=PRESET_NAMES)
        p.add_argument("--game", metavar="FILE")
        if name == "newcomb":
            p.add_argument("--view", choices=tuple(VIEWERS), default=None)
        else:
            p.add_argument("--mode", type=_csv_list, default=None,
                           help="individual, sum, or individual,sum")
        p.add_argument("--agents", type=_csv_list, default=None, help=f"comma list of {', '.join(AGENT_IDS)}")
        p.add_argument("--alpha", type=float, default=0.1)
        p.add_argument("--gamma", type=float, default=0.9)
        p.add_argument("--epsilon", type=float, default=0.1)
        p.add_argument("--steps", type=int, default=None)
        p.add_argument("--runs", type=int, default=None)
        p.add_argument("--p-grid", type=_grid, default=None, metavar="START:STOP:STEP")
        p.add_argument("--window", type=float, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--metric", choices=tuple(METRIC_KIND), default=None,
                       help="metric plotted in --svg")
        p.add_argument("--out", metavar="CSV", help="CSV output path (default: stdout)")
        p.add_argument("--svg", metavar="SVG", help="optional SVG plot path")
    return parser


def _format_threshold(view) -> str:
    try:
        t = eu_threshold(view)
    except AlwaysIndifferent:
        return "always indifferent"
    if t is None:
        return "none (one action is better for every p in [0, 1])"
    if isinstance(t, Fraction):
        return f"{t.numerator}/{t.denominator} = {float(t):.9g}"
    return f"{t:.12g}"


def _format_view(title: str, view) -> str:
    lines = [title, f"  {'':<18}{'repair':>12}{'norepair':>12}"]
    for pred in ACTIONS:
        cells = "".join(f"{str(view.payoff(pred, a)):>12}" for a in ACTIONS)
        lines.append(f"  predict {pred.label:<10}{cells}")
    dom = dominant_action(view)
    lines.append(f"  dominant action: {dom.label if dom is not None else 'none'}")
    lines.append(f"  EU threshold: {_format_threshold(view)}")
    return "\n".join(lines)


def _cmd_check(args, out) -> int:
    if args.pd is not None:
        if len(args.pd) != 4:
            raise ConfigError("--pd takes exactly four values T,R,P,S")
        params = PdParams(*args.pd)
        valid = check_pd_conditions(params)
        game = make_pd_game(params)
        print(f"valid PD: {str(valid).lower()}", file=out)
    else:
        game = load_game(args.game)
        print(f"symmetric: {str(game.symmetric()).lower()}", file=out)
    view = derive_newcomb_view(game, Player.ROW)
    print(_format_view("row player view", view), file=out)
    return 0


def _cmd_analyze(args, out) -> int:
    game = load_game(args.game) if args.game else ROBOT_HUMAN_GAME
    print(f"symmetric: {str(game.symmetric()).lower()}", file=out)
    print(_format_view("robot (row player) view", derive_newcomb_view(game, Player.ROW)), file=out)
    print(_format_view("human (column player) view", derive_newcomb_view(game, Player.COL)), file=out)
    return 0


def _sweep_config(args) -> ExperimentConfig:
    kind = args.command
    if args.preset:
        cfg = figure_preset(args.preset)
        if cfg.env.kind != kind:
            raise ConfigError(f"preset {args.preset} is a {cfg.env.kind} experiment")
        env, roster, name, metric = cfg.env, cfg.roster, cfg.name, cfg.metric
        steps, runs, grid, window, seed = cfg.steps, cfg.runs, cfg.grid, cfg.window, cfg.seed
    else:
        env = roster = None
        name = None
        metric = "mean_payout"
        steps, runs, grid, window, seed = 10000, 50, probability_grid(0.0, 1.0, 0.05), DEFAULT_WINDOW, 0

    if kind == "newcomb":
        if env is None or args.game or args.view:
            game = load_game(args.game) if args.game else ROBOT_HUMAN_GAME
            view = args.view or "robot"
            env = EnvSpec("newcomb", game, VIEWERS[view])
            name = name or f"newcomb-{view}"
        if args.agents or roster is None:
            roster = tuple(AgentSpec(a) for a in (args.agents or ["sarsa", "avgq", "eu"]))
    else:
        if env is None or args.game:
            game = load_game(args.game) if args.game else make_pd_game(OIL_SPILL_PD)
            env = EnvSpec("pd", game)
            name = name or "pd"
        if args.agents or args.mode or roster is None:
            try:
                modes = [RewardMode(m) for m in (args.mode or ["individual"])]
            except ValueError:
                raise ConfigError("--mode takes individual and/or sum") from None
            agents = args.agents or (
                sorted({a.identifier for a in roster}, key=AGENT_IDS.index) if roster else ["sarsa", "avgq"]
            )
            roster = tuple(AgentSpec(a, m) for a in agents for m in modes)

    if args.steps is not None:
        steps = args.steps
    if args.runs is not None:
        runs = args.runs
    if args.p_grid is not None:
        grid = args.p_grid
    if args.window is not None:
        window = args.window
    if args.seed is not None:
        seed = args.seed
    if args.metric is not None:
        metric = METRIC_KIND[args.metric]
    try:
        params = Hyperparams(args.alpha, args.gamma, args.epsilon)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return ExperimentConfig(name, env, roster, params, steps, runs, grid, window, seed, metric).validate()


def _cmd_sweep(args, out) -> int:
    cfg = _sweep_config(args)
    log.info("running %s: %d agents x %d grid points x %d runs x %d steps",
             cfg.name, len(cfg.roster), len(cfg.grid), cfg.runs, cfg.steps)
    result = run_sweep(cfg, workers=args.workers)
    try:
        if args.out:
            emit_csv(result, args.out)
        else:
            write_csv(result, out)
        if args.svg:
            render_svg(result, KIND_OF_METRIC[cfg.metric], args.svg)
    except OSError as exc:
        print(f"dilemma: error: cannot write output: {exc}", file=sys.stderr)
        return 1
    return 0


def _join_negative_values(argv: List[str]) -> List[str]:
    # argparse reads "-1000,-2000,..." as an option; bind it to --pd explicitly
    joined, i = [], 0
    while i < len(argv):
        if argv[i] == "--pd" and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            joined.append(f"--pd={argv[i + 1]}")
            i += 2
        else:
            joined.append(argv[i])
            i += 1
    return joined


def run_cli(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    handlers = {"check": _cmd_check, "analyze": _cmd_analyze, "newcomb": _cmd_sweep, "pd": _cmd_sweep}
    try:
        return handlers[args.command](args, out)
    except (ConfigError, GameFileError, ValueError) as exc:
        print(f"dilemma: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        # unreadable input files are bad arguments
        print(f"dilemma: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())
