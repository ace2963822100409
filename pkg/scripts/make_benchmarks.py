"""Regenerate the committed benchmark suites under benchmarks/.

    python scripts/make_benchmarks.py

Output is deterministic; rerunning rewrites identical files.
"""

from __future__ import annotations

import math
from fractions import Fraction
from pathlib import Path

from convexcover import CheeseParams, MazeParams, gen_ccheese, gen_cheese, gen_maze, serialize_instance

ROOT = Path(__file__).resolve().parent.parent / "benchmarks"


def cheese_params(holes: int, seed: int) -> CheeseParams:
    side = 120 * math.isqrt(max(holes, 1)) + 240
    return CheeseParams(target_holes=holes, field_width=side, field_height=side, seed=seed)


def suite():
    for k, holes in enumerate([3, 5, 6, 8, 10, 12, 14, 16, 18, 20, 22, 25, 28, 30, 33, 36, 40, 45, 50, 60]):
        yield gen_cheese(cheese_params(holes, 100 + k))
    for k, holes in enumerate([3, 5, 6, 8, 10, 12, 14, 16, 18, 20, 22, 25, 28, 30, 33, 36, 40, 45, 50, 60]):
        yield gen_ccheese(cheese_params(holes, 200 + k))
    grids = [(3, 3), (3, 4), (4, 4), (4, 5), (5, 5), (5, 6), (6, 6), (6, 7), (7, 7), (7, 8),
             (8, 8), (3, 9), (9, 3), (4, 8), (8, 4), (5, 9), (9, 5), (6, 9), (9, 9), (10, 10)]
    for k, (c, r) in enumerate(grids):
        yield gen_maze(MazeParams(grid_cols=c, grid_rows=r, seed=300 + k,
                                  removal_fraction=Fraction(1, 10), perturbation_fraction=Fraction(1, 2)))
    # two larger instances to exercise scaling
    yield gen_cheese(cheese_params(200, 900))
    yield gen_cheese(cheese_params(420, 901))


def smoke():
    yield gen_cheese(cheese_params(4, 1))
    yield gen_ccheese(cheese_params(4, 2))
    yield gen_maze(MazeParams(grid_cols=3, grid_rows=3, seed=3))


def write(target: Path, instances) -> None:
    target.mkdir(parents=True, exist_ok=True)
    for old in target.glob("*.json"):
        old.unlink()
    for inst in instances:
        (target / f"{inst.name}.json").write_bytes(serialize_instance(inst))


if __name__ == "__main__":
    write(ROOT / "suite", suite())
    write(ROOT / "smoke", smoke())
