"""Minimum coverage of polygons with holes by convex pieces: exact geometry,
benchmark generators, three solvers, a verifier and contest scoring."""

from .cliquecover import solve_cliquecover
from .generators import CheeseParams, MazeParams, gen_ccheese, gen_cheese, gen_maze
from .geometry import Point
from .greedy import solve_greedy_merge
from .model import (
    Instance,
    Solution,
    parse_instance,
    parse_solution,
    serialize_instance,
    serialize_solution,
)
from .regions import PolygonWithHoles, make_region
from .scoring import build_leaderboard, score_instance
from .setcover import SetCoverConfig, solve_setcover
from .triangulate import SteinerPolicy, triangulate
from .verify import verify_solution

__version__ = "0.1.0"

__all__ = [
    "CheeseParams",
    "Instance",
    "MazeParams",
    "Point",
    "PolygonWithHoles",
    "SetCoverConfig",
    "Solution",
    "SteinerPolicy",
    "build_leaderboard",
    "gen_ccheese",
    "gen_cheese",
    "gen_maze",
    "make_region",
    "parse_instance",
    "parse_solution",
    "score_instance",
    "serialize_instance",
    "serialize_solution",
    "solve_cliquecover",
    "solve_greedy_merge",
    "solve_setcover",
    "triangulate",
    "verify_solution",
]
