"""Plain-text game definitions.

Grammar, one entry per line::

    # comment (also allowed after a value)
    <key> = <number>

``<number>`` is an integer, a decimal (``-2.5``) or a ratio (``-7/3``) and
is kept exact. A file holds either the four symmetric PD keys ``T R P S``
or all eight asymmetric keys ``row.<a>.<b>`` and ``col.<a>.<b>`` with
``<a>, <b>`` in ``repair``/``norepair`` (``<a>`` is the row player's
action). Missing, duplicate, unknown or mixed keys are rejected.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Dict, Union

from .games import ACTIONS, BimatrixGame, PdParams, make_pd_game

PD_KEYS = ("T", "R", "P", "S")
BIMATRIX_KEYS = tuple(
    f"{side}.{a.label}.{b.label}" for side in ("row", "col") for a in ACTIONS for b in ACTIONS
)


class GameFileError(ValueError):
    pass


def _number(text: str, lineno: int):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise GameFileError(f"line {lineno}: not a number: {text!r}") from None
    return int(value) if value.denominator == 1 else value


def parse_game(text: str) -> BimatrixGame:
    entries: Dict[str, Union[int, Fraction]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise GameFileError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in PD_KEYS and key not in BIMATRIX_KEYS:
            raise GameFileError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise GameFileError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = _number(value, lineno)

    pd = [k for k in entries if k in PD_KEYS]
    if pd and len(pd) != len(entries):
        raise GameFileError("cannot mix T/R/P/S keys with row./col. keys")
    if pd:
        missing = [k for k in PD_KEYS if k not in entries]
        if missing:
            raise GameFileError(f"missing keys: {', '.join(missing)}")
        return make_pd_game(PdParams(**{k: entries[k] for k in PD_KEYS}))

    missing = [k for k in BIMATRIX_KEYS if k not in entries]
    if missing:
        raise GameFileError(f"missing keys: {', '.join(missing)}")

    def table(side):
        return tuple(
            tuple(entries[f"{side}.{a.label}.{b.label}"] for b in ACTIONS) for a in ACTIONS
        )

    return BimatrixGame(table("row"), table("col"))


def load_game(path) -> BimatrixGame:
    return parse_game(Path(path).read_text(encoding="utf-8"))


def format_game(game: BimatrixGame) -> str:
    lines = []
    for side, tab in (("row", game.row), ("col", game.col)):
        for a in ACTIONS:
            for b in ACTIONS:
                lines.append(f"{side}.{a.label}.{b.label} = {tab[a][b]}")
    return "\n".join(lines) + "\n"
