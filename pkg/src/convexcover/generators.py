"""Seeded benchmark generators: cheese, ccheese and maze."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

from .geometry import (
    DegenerateHull,
    Location,
    Point,
    bbox,
    bbox_overlap,
    convex_hull,
    orient,
    point_in_polygon,
    segments_cross_properly,
    segments_intersect,
    twice_signed_area,
)
from .model import Instance
from .regions import InvalidRegion, make_region, validate_region
from .rng import Rng


class GeneratorStall(RuntimeError):
    def __init__(self, message: str, placed: int = 0):
        super().__init__(message)
        self.placed = placed


class InvalidParams(ValueError):
    pass


@dataclass(frozen=True)
class CheeseParams:
    target_holes: int = 10
    field_width: int = 1000
    field_height: int = 1000
    hole_vertex_range: tuple[int, int] = (3, 6)
    hole_radius: int = 30
    seed: int = 0

    def check(self) -> None:
        lo, hi = self.hole_vertex_range
        if self.target_holes < 0:
            raise InvalidParams("target_holes must be >= 0")
        if not 3 <= lo <= hi <= 64:
            raise InvalidParams("hole_vertex_range must lie within [3, 64]")
        if self.hole_radius < 1:
            raise InvalidParams("hole_radius must be >= 1")
        if min(self.field_width, self.field_height) < 4 * self.hole_radius:
            raise InvalidParams("field must be at least 4 * hole_radius wide and high")


@dataclass(frozen=True)
class MazeParams:
    grid_cols: int = 5
    grid_rows: int = 5
    cell_size: int = 10
    removal_fraction: Fraction = Fraction(1, 10)
    perturbation_fraction: Fraction = Fraction(1, 2)
    perturbation_magnitude: int = 4
    seed: int = 0

    def check(self) -> None:
        if self.grid_cols < 2 or self.grid_rows < 2:
            raise InvalidParams("grid must be at least 2 x 2")
        if self.cell_size < 1:
            raise InvalidParams("corridor width (cell_size) must be positive")
        for f in (self.removal_fraction, self.perturbation_fraction):
            if not 0 <= Fraction(f) <= 1:
                raise InvalidParams("fractions must lie in [0, 1]")
        if not 0 <= self.perturbation_magnitude < self.cell_size:
            raise InvalidParams("perturbation_magnitude must be in [0, corridor width)")


def _canonical_hole(loop) -> tuple[Point, ...]:
    pts = list(loop)
    if twice_signed_area(pts) > 0:
        pts.reverse()
    k = min(range(len(pts)), key=pts.__getitem__)
    return tuple(pts[k:] + pts[:k])


def two_opt_untangle(tour: list[Point]) -> list[Point]:
    """Reverse tour segments until no two edges cross properly; always the
    lowest-index crossing pair first."""
    n = len(tour)
    tour = list(tour)
    changed = True
    while changed:
        changed = False
        for i in range(n - 2):
            a, b = tour[i], tour[i + 1]
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                c, d = tour[j], tour[(j + 1) % n]
                if segments_cross_properly(a, b, c, d):
                    tour[i + 1:j + 1] = reversed(tour[i + 1:j + 1])
                    changed = True
                    break
            if changed:
                break
    return tour


def _is_simple(loop) -> bool:
    try:
        validate_region(make_region(loop))
    except InvalidRegion:
        return False
    return True


def gen_hole(center: Point, k: int, radius: int, rng: Rng, convex: bool = False) -> tuple[Point, ...]:
    """Random simple polygon on ``k`` points near ``center`` (clockwise)."""
    if k < 3:
        raise InvalidParams("a hole needs at least 3 points")
    cx, cy = center
    for _ in range(1000):
        pts = [Point(cx + rng.randint(-radius, radius), cy + rng.randint(-radius, radius)) for _ in range(k)]
        if len(set(pts)) < k:
            continue
        if all(orient(pts[0], pts[1], p) == 0 for p in pts[2:]):
            continue
        rng.shuffle(pts)
        if convex:
            try:
                loop = list(convex_hull(pts))
            except DegenerateHull:
                continue
        else:
            loop = two_opt_untangle(pts)
            if not _is_simple(loop):
                continue
        return _canonical_hole(loop)
    raise GeneratorStall("could not sample a simple hole in 1000 attempts")


def holes_disjoint(h1, h2, b1=None, b2=None) -> bool:
    b1 = b1 or bbox(h1)
    b2 = b2 or bbox(h2)
    if not bbox_overlap(b1, b2):
        return True
    n1, n2 = len(h1), len(h2)
    for i in range(n1):
        a, b = h1[i - 1], h1[i]
        for j in range(n2):
            if segments_intersect(a, b, h2[j - 1], h2[j]):
                return False
    if point_in_polygon(h1[0], h2) is not Location.OUTSIDE:
        return False
    return point_in_polygon(h2[0], h1) is Location.OUTSIDE


def _inflate(centers: list[Point], holes, radius: int) -> tuple[Point, ...]:
    """Convex outer boundary around the centers, with edges pushed outward
    until every hole vertex is strictly inside."""
    hole_pts = [p for h in holes for p in h]
    outer = convex_hull(centers)
    step = radius + 1
    for _ in range(100):
        pts = list(outer)
        pushed = False
        n = len(outer)
        for i in range(n):
            a, b = outer[i - 1], outer[i]
            if any(orient(a, b, p) <= 0 for p in hole_pts):
                dx, dy = b[0] - a[0], b[1] - a[1]
                s = (step * ((dy > 0) - (dy < 0)), step * ((dx < 0) - (dx > 0)))
                pts.append(Point(a[0] + s[0], a[1] + s[1]))
                pts.append(Point(b[0] + s[0], b[1] + s[1]))
                pushed = True
        if not pushed:
            return outer
        outer = convex_hull(pts)
    # fall back to the full Minkowski sum with the square of half-width step
    corners = [(sx * step, sy * step) for sx in (-1, 1) for sy in (-1, 1)]
    return convex_hull(Point(p[0] + cx, p[1] + cy) for p in convex_hull(centers) for cx, cy in corners)


def _gen_cheese(params: CheeseParams, convex: bool, kind: str) -> Instance:
    params.check()
    rng = Rng(params.seed)
    r = params.hole_radius
    lo, hi = params.hole_vertex_range
    holes: list[tuple[Point, ...]] = []
    boxes = []
    centers: list[Point] = []
    budget = max(1000, 50 * params.target_holes)
    failures = 0
    while len(holes) < params.target_holes:
        c = Point(rng.randint(0, params.field_width), rng.randint(0, params.field_height))
        k = rng.randint(lo, hi)
        hole = gen_hole(c, k, r, rng, convex=convex)
        hb = bbox(hole)
        if all(holes_disjoint(hole, h, hb, b) for h, b in zip(holes, boxes)):
            holes.append(hole)
            boxes.append(hb)
            centers.append(c)
            continue
        failures += 1
        if failures > budget:
            raise GeneratorStall(f"retry budget exhausted after placing {len(holes)} holes", len(holes))
    hull_pts = list(centers)
    while True:
        try:
            convex_hull(hull_pts)
            break
        except DegenerateHull:
            hull_pts.append(Point(rng.randint(0, params.field_width), rng.randint(0, params.field_height)))
    outer = _inflate(hull_pts, holes, r)
    region = make_region(outer, holes)
    validate_region(region)
    p = asdict(params)
    p["hole_vertex_range"] = list(params.hole_vertex_range)
    name = f"{kind}_{params.target_holes}_{params.seed}"
    return Instance(name, region, {"generator": kind, "seed": params.seed, "params": p})


def gen_cheese(params: CheeseParams) -> Instance:
    return _gen_cheese(params, convex=False, kind="cheese")


def gen_ccheese(params: CheeseParams) -> Instance:
    return _gen_cheese(params, convex=True, kind="ccheese")


def gen_maze(params: MazeParams) -> Instance:
    params.check()
    rng = Rng(params.seed)
    s = params.cell_size
    m = params.perturbation_magnitude
    width = (2 * params.grid_cols + 1) * s
    height = (2 * params.grid_rows + 1) * s
    outer = (Point(0, 0), Point(width, 0), Point(width, height), Point(0, height))
    grid: dict[tuple[int, int], tuple[Point, ...]] = {}
    for j in range(params.grid_rows):
        for i in range(params.grid_cols):
            if rng.bernoulli(params.removal_fraction):
                continue
            x0, y0 = (2 * i + 1) * s, (2 * j + 1) * s
            grid[i, j] = (Point(x0, y0), Point(x0, y0 + s), Point(x0 + s, y0 + s), Point(x0 + s, y0))
    signs = ((-1, -1), (-1, 1), (1, 1), (1, -1))
    for (i, j) in sorted(grid, key=lambda t: (t[1], t[0])):
        if m == 0 or not rng.bernoulli(params.perturbation_fraction):
            continue
        base = grid[i, j]
        for _ in range(50):
            mask = rng.randint(1, 15)
            moved = []
            for v, (p, (sx, sy)) in enumerate(zip(base, signs)):
                if mask >> v & 1:
                    moved.append(Point(p[0] + sx * rng.randint(0, m), p[1] + sy * rng.randint(0, m)))
                else:
                    moved.append(p)
            moved = tuple(moved)
            if _maze_fits(moved, (i, j), grid, width, height):
                grid[i, j] = _canonical_hole(moved)
                break
    holes = [_canonical_hole(grid[key]) for key in sorted(grid, key=lambda t: (t[1], t[0]))]
    region = make_region(outer, holes)
    validate_region(region)
    p = asdict(params)
    p["removal_fraction"] = str(params.removal_fraction)
    p["perturbation_fraction"] = str(params.perturbation_fraction)
    name = f"maze_{params.grid_cols}x{params.grid_rows}_{params.seed}"
    return Instance(name, region, {"generator": "maze", "seed": params.seed, "params": p})


def _maze_fits(hole, key, grid, width, height) -> bool:
    xs = [p[0] for p in hole]
    ys = [p[1] for p in hole]
    if min(xs) <= 0 or min(ys) <= 0 or max(xs) >= width or max(ys) >= height:
        return False
    if not _is_simple(hole):
        return False
    i, j = key
    hb = bbox(hole)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            other = grid.get((i + di, j + dj))
            if (di or dj) and other is not None and not holes_disjoint(hole, other, hb):
                return False
    return True


GENERATORS = {"cheese": gen_cheese, "ccheese": gen_ccheese, "maze": gen_maze}
