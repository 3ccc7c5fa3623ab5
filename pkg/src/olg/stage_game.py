"""Finite stage games with exact rational payoffs.

A game stores one payoff vector per pure action profile.  Profiles are
indexed in mixed-radix order with player 1 outermost, so profile index 0 is
``(0, 0, ..., 0)`` and the last player's action varies fastest.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np

from olg.geometry import Point, Polytope, hull_equal

ActionProfile = tuple[int, ...]
PayoffVector = tuple[Fraction, ...]

BUNDLED_GAMES = ("prisoners_dilemma", "coordination", "battle_of_sexes", "three_action", "rectangle")


class GameFormatError(ValueError):
    """Raised when a game document is malformed or inconsistent."""


def parse_rational(value) -> Fraction:
    """Parse an int, a ``"p/q"`` string or a decimal literal exactly."""
    if isinstance(value, bool):
        raise GameFormatError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, float):
        # json floats are routed through Decimal by load_game; a bare float
        # is taken at its shortest repr, not its binary expansion
        return Fraction(Decimal(repr(value)))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise GameFormatError(f"not a rational: {value!r}") from exc
    raise GameFormatError(f"not a rational: {value!r}")


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


@dataclass(frozen=True)
class StageGame:
    actions: tuple[tuple[str, ...], ...]
    payoffs: tuple[PayoffVector, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = len(self.actions)
        if n < 2:
            raise GameFormatError(f"need at least 2 players, got {n}")
        for i, labels in enumerate(self.actions):
            if not labels:
                raise GameFormatError(f"player {i + 1} has no actions")
            if len(set(labels)) != len(labels):
                raise GameFormatError(f"duplicate action labels for player {i + 1}")
        size = math.prod(len(a) for a in self.actions)
        if len(self.payoffs) != size:
            raise GameFormatError(f"payoff tensor has {len(self.payoffs)} entries, expected {size}")
        for vec in self.payoffs:
            if len(vec) != n:
                raise GameFormatError(f"payoff vector {vec} has dimension {len(vec)}, expected {n}")

    @property
    def n(self) -> int:
        return len(self.actions)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.actions)

    @property
    def num_profiles(self) -> int:
        return len(self.payoffs)

    @cached_property
    def profiles(self) -> tuple[ActionProfile, ...]:
        return tuple(itertools.product(*(range(k) for k in self.shape)))

    def profile_index(self, a: ActionProfile) -> int:
        self.check_profile(a)
        idx = 0
        for choice, k in zip(a, self.shape):
            idx = idx * k + choice
        return idx

    def check_profile(self, a: ActionProfile) -> None:
        if len(a) != self.n:
            raise IndexError(f"profile {a} has {len(a)} entries, expected {self.n}")
        for i, (choice, k) in enumerate(zip(a, self.shape)):
            if not 0 <= choice < k:
                raise IndexError(f"action index {choice} out of range for player {i + 1}")

    def label(self, a: ActionProfile) -> str:
        names = [self.actions[i][c] for i, c in enumerate(a)]
        sep = "" if all(len(s) == 1 for s in names) else "."
        return sep.join(names)

    def profile_by_label(self, text: str) -> ActionProfile:
        for a in self.profiles:
            if self.label(a) == text:
                return a
        raise KeyError(text)

    @cached_property
    def integer_payoffs(self) -> tuple[np.ndarray, int]:
        """Payoffs scaled to integers: ``(U, D)`` with ``u(a)_i == U[a, i] / D``.

        ``U`` has dtype int64 when it fits comfortably, otherwise object.
        """
        denom = 1
        for vec in self.payoffs:
            for x in vec:
                denom = math.lcm(denom, x.denominator)
        rows = [[int(x * denom) for x in vec] for vec in self.payoffs]
        biggest = max(abs(x) for row in rows for x in row)
        dtype = np.int64 if biggest < 2**40 else object
        return np.array(rows, dtype=dtype), denom


def payoff(g: StageGame, a: ActionProfile) -> PayoffVector:
    return g.payoffs[g.profile_index(a)]


def one_shot_hull(g: StageGame) -> Polytope:
    return Polytope.from_points(g.payoffs)


def payoff_cube(g: StageGame) -> Polytope:
    bounds = [(min(v[i] for v in g.payoffs), max(v[i] for v in g.payoffs)) for i in range(g.n)]
    corners = {tuple(c) for c in itertools.product(*bounds)}
    return Polytope.from_points(corners, canonical=False)


def cube_coincides(g: StageGame) -> bool:
    return hull_equal(one_shot_hull(g), payoff_cube(g))


def game_from_dict(doc: dict, name: str = "") -> StageGame:
    try:
        n = doc["players"]
        actions = doc["actions"]
        tensor = doc["payoffs"]
    except (KeyError, TypeError) as exc:
        raise GameFormatError(f"missing field: {exc}") from exc
    if not isinstance(n, int) or isinstance(n, bool):
        raise GameFormatError("'players' must be an integer")
    if n < 2:
        raise GameFormatError(f"need at least 2 players, got {n}")
    if not isinstance(actions, list) or len(actions) != n:
        raise GameFormatError("'actions' must list one action set per player")
    labels = tuple(tuple(str(s) for s in acts) for acts in actions)
    shape = tuple(len(a) for a in labels)

    flat: list[PayoffVector] = []

    def walk(node, depth):
        if depth == n:
            if not isinstance(node, list) or len(node) != n:
                raise GameFormatError(f"payoff leaf {node!r} must hold {n} values")
            flat.append(tuple(parse_rational(x) for x in node))
            return
        if not isinstance(node, list) or len(node) != shape[depth]:
            raise GameFormatError(
                f"payoff tensor shape mismatch at depth {depth}: expected {shape[depth]} entries"
            )
        for child in node:
            walk(child, depth + 1)

    walk(tensor, 0)
    return StageGame(labels, tuple(flat), name=str(doc.get("name") or name))


def parse_game(text: str, name: str = "") -> StageGame:
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise GameFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise GameFormatError("game document must be a JSON object")
    return game_from_dict(doc, name=name)


def load_game(path) -> StageGame:
    path = Path(path)
    return parse_game(path.read_text(), name=path.stem)


def load_bundled(name: str) -> StageGame:
    text = resources.files("olg.games").joinpath(f"{name}.json").read_text()
    return parse_game(text, name=name)


def game_to_dict(g: StageGame) -> dict:
    def nest(depth, offset, stride):
        if depth == g.n:
            return [format_rational(x) for x in g.payoffs[offset]]
        k = g.shape[depth]
        sub = stride // k
        return [nest(depth + 1, offset + j * sub, sub) for j in range(k)]

    doc = {"players": g.n, "actions": [list(a) for a in g.actions], "payoffs": nest(0, 0, g.num_profiles)}
    if g.name:
        doc["name"] = g.name
    return doc


def serialize_game(g: StageGame) -> str:
    return json.dumps(game_to_dict(g), indent=1)


def stage_points(g: StageGame) -> list[Point]:
    return list(g.payoffs)
