"""Exact feasible payoff sets of overlapping-generations repeated games."""

from olg.feasible import (
    DiscountSpec,
    EnumerationCapError,
    effective_discount,
    feasible_set,
    lifetime_payoff,
    max_welfare,
    stable_payoff,
    vertex_generators,
)
from olg.geometry import Polytope, hull_contains, hull_equal, hull_membership
from olg.stage_game import StageGame, load_bundled, load_game, one_shot_hull, payoff_cube

__all__ = [
    "DiscountSpec",
    "EnumerationCapError",
    "Polytope",
    "StageGame",
    "effective_discount",
    "feasible_set",
    "hull_contains",
    "hull_equal",
    "hull_membership",
    "lifetime_payoff",
    "load_bundled",
    "load_game",
    "max_welfare",
    "one_shot_hull",
    "payoff_cube",
    "stable_payoff",
    "vertex_generators",
]

__version__ = "0.1.0"
