"""Acceptance criteria, one test per criterion.

Each test reports through the ``criterion`` fixture, which prints a
PASS/FAIL line and repeats it in the terminal summary.
"""

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import L_OUTER, SMOKE, SUITE, instance, poly, square
from oracles import Grid, load_frozen, min_set_cover, near_boundary, raster_inside, region_loops
from convexcover.cli import bench_rows
from convexcover.cliquecover import VisibilityGraph, build_visibility_graph, clique_cover, solve_cliquecover
from convexcover.generators import GENERATORS, CheeseParams, MazeParams, gen_ccheese, gen_cheese, gen_maze
from convexcover.geometry import Location, Point, convex_hull, point_in_convex
from convexcover.greedy import solve_greedy_merge
from convexcover.model import make_solution, parse_instance, serialize_instance, serialize_solution
from convexcover.regions import point_in_region, piece_contained, region_difference
from convexcover.scoring import score_counts, score_instance
from convexcover.setcover import Schedule, SetCoverInstance, anneal_set_cover, greedy_set_cover, solve_setcover
from convexcover.triangulate import SteinerPolicy, steiner_points, triangulate
from convexcover.verify import Uncovered, verify_solution


def random_instance(seed: int):
    """Small seeded instance, rotating through the three generators."""
    kind = seed % 3
    if kind == 2:
        return gen_maze(MazeParams(grid_cols=3 + seed % 3, grid_rows=3, seed=seed))
    params = CheeseParams(target_holes=2 + seed % 6, field_width=400, field_height=400,
                          hole_radius=25, seed=seed)
    return (gen_cheese, gen_ccheese)[kind](params)


def vertex_count(region) -> int:
    return len(region.outer) + sum(len(h) for h in region.holes)


# --- 1 ---------------------------------------------------------------------

def test_criterion_1_scoring_fidelity(criterion):
    t0 = time.perf_counter()
    anchors = (score_instance(7, 7), score_instance(5, 10), score_instance(3, None))
    counts = {
        "north": {"a": 4, "b": 9, "c": 30, "d": 2},
        "south": {"a": 6, "b": 9, "c": None, "d": 1},
        "west": {"a": 5, "c": 24, "d": 3},
    }
    names = ["a", "b", "c", "d"]
    table = score_counts(counts, names)
    best = {"a": 4, "b": 9, "c": 24, "d": 1}
    expect = {
        "north": 1 + 1 + Fraction(576, 900) + Fraction(1, 4),
        "south": Fraction(16, 36) + 1 + 0 + 1,
        "west": Fraction(16, 25) + 0 + 1 + Fraction(1, 9),
    }
    got = {t.name: t.total for t in table.teams}
    dt = time.perf_counter() - t0
    ok = anchors == (1, Fraction(1, 4), 0) and table.best == best and got == expect and dt < 1
    criterion(1, ok, f"anchors={[str(a) for a in anchors]} totals exact, {dt:.3f}s")


# --- 2 ---------------------------------------------------------------------

def test_criterion_2_verifier_soundness(criterion):
    t0 = time.perf_counter()
    rng = random.Random(11)
    bad = []
    checked = 0
    seed = 0
    while checked < 100:
        inst = random_instance(seed)
        seed += 1
        if vertex_count(inst.region) > 200:
            continue
        checked += 1
        tris = triangulate(inst.region).polygons()
        if not verify_solution(inst, make_solution(inst.name, tris)).valid:
            bad.append((inst.name, "full cover rejected"))
            continue
        # triangles tile the region, so each one is needed
        drop = rng.randrange(len(tris))
        rest = tris[:drop] + tris[drop + 1:]
        report = verify_solution(inst, make_solution(inst.name, rest))
        if report.valid or not isinstance(report.failures[0], Uncovered):
            bad.append((inst.name, "deletion not detected"))
            continue
        w = report.failures[0].witness
        if point_in_region(w, inst.region) is Location.OUTSIDE or any(
                point_in_convex(w, p) is not Location.OUTSIDE for p in rest):
            bad.append((inst.name, f"witness {w} is covered"))
    dt = time.perf_counter() - t0
    criterion(2, not bad and dt < 120, f"{checked} instances, {len(bad)} failures {bad[:3]}, {dt:.1f}s")


# --- 3 ---------------------------------------------------------------------

def _random_piece(rng, region, mesh, polys, g, contained: bool):
    if contained:
        edges = g.edges()
        if edges and rng.random() < 0.8:
            t, u = rng.choice(edges)
            return convex_hull(polys[t] + polys[u])
        return tuple(rng.choice(polys))
    x0, y0, x1, y1 = (int(v) for v in region.box)
    w, h = x1 - x0, y1 - y0
    while True:
        pts = [Point.of(rng.randint(x0 - w // 4, x1 + w // 4), rng.randint(y0 - h // 4, y1 + h // 4))
               for _ in range(rng.randint(3, 6))]
        try:
            return convex_hull(pts)
        except ValueError:
            continue


def test_criterion_3_oracle_equivalence(criterion):
    t0 = time.perf_counter()
    rng = random.Random(3)
    disagreements = []
    kinds = {True: 0, False: 0}
    for i in range(100):
        inst = random_instance(1000 + i)
        region = inst.region
        mesh = triangulate(region)
        polys = mesh.polygons()
        g = build_visibility_graph(mesh, region)
        piece = _random_piece(rng, region, mesh, polys, g, contained=i % 2 == 0)

        contained = piece_contained(piece, region)
        kinds[contained] += 1
        parts = region_difference(region, piece)

        xs = [p.x for p in piece] + [region.box[0], region.box[2]]
        ys = [p.y for p in piece] + [region.box[1], region.box[3]]
        grid = Grid((min(xs), min(ys), max(xs), max(ys)), 1024)
        in_region = raster_inside(grid, region_loops(region))
        in_piece = raster_inside(grid, [piece])
        in_diff = np.zeros_like(in_region)
        for part in parts:
            in_diff |= raster_inside(grid, region_loops(part))
        amb = near_boundary(grid, region_loops(region))
        near_boundary(grid, [piece], amb)
        for part in parts:
            near_boundary(grid, region_loops(part), amb)

        wrong_cells = int(np.count_nonzero((in_diff != (in_region & ~in_piece)) & ~amb))
        escapes = bool(np.any(in_piece & ~in_region & ~amb))
        if wrong_cells or contained == escapes:
            disagreements.append((inst.name, wrong_cells, contained, escapes))
    dt = time.perf_counter() - t0
    ok = not disagreements and dt < 300
    criterion(3, ok, f"100 pairs ({kinds[True]} contained), disagreements={disagreements[:3]}, {dt:.1f}s")


# --- 4 ---------------------------------------------------------------------

def test_criterion_4_combinatorial_oracles(criterion):
    t0 = time.perf_counter()
    frozen = load_frozen()
    clique_bad = 0
    for case in frozen["clique_corpus"]:
        k = len(clique_cover(VisibilityGraph.from_edges(case["n"], case["edges"]), seed=0))
        clique_bad += not case["optimum"] <= k <= case["optimum"] + 2
    sc_bad = 0
    for case in frozen["setcover_corpus"]:
        # the frozen optimum is re-derived here as well
        assert min_set_cover(case["witnesses"], [set(s) for s in case["sets"]]) == case["optimum"]
        sc = SetCoverInstance(list(range(case["witnesses"])), [frozenset(s) for s in case["sets"]])
        gr = greedy_set_cover(sc)
        an = anneal_set_cover(sc, gr, Schedule(steps=400), seed=0)
        sc_bad += not (len(gr) >= case["optimum"] and len(an) <= len(gr))
    dt = time.perf_counter() - t0
    ok = clique_bad == 0 and sc_bad == 0 and dt < 120
    criterion(4, ok, f"clique misses={clique_bad}/200, setcover misses={sc_bad}/100, {dt:.1f}s")


# --- 5 ---------------------------------------------------------------------

@pytest.mark.slow
def test_criterion_5_feasibility_sweep(criterion):
    t0 = time.perf_counter()
    rows = bench_rows(SUITE, seed=0)
    dt = time.perf_counter() - t0
    k = {(name, algo): pieces for name, algo, pieces, _, _ in rows}
    invalid = [(name, algo) for name, algo, _, ok, _ in rows if not ok]
    names = sorted({name for name, *_ in rows})
    sc = sum(k[n, "setcover"] <= k[n, "greedy"] for n in names) / len(names)
    cc = sum(k[n, "cliquecover"] <= k[n, "greedy"] for n in names) / len(names)
    ok = len(names) >= 60 and not invalid and sc >= 0.8 and cc >= 0.8
    criterion(5, ok, f"{len(names)} instances, invalid={invalid}, setcover<=greedy {sc:.0%}, "
                     f"cliquecover<=greedy {cc:.0%}, {dt:.0f}s")


# --- 6 ---------------------------------------------------------------------

def test_criterion_6_known_optima(criterion):
    t0 = time.perf_counter()
    convex = [
        instance("sq", square(5)),
        instance("tri", poly((0, 0), (7, 1), (2, 5))),
        instance("hex", poly((0, 0), (4, 0), (6, 2), (4, 4), (0, 4), (-2, 2))),
        instance("oct", poly((2, 0), (5, 0), (7, 2), (7, 5), (5, 7), (2, 7), (0, 5), (0, 2))),
    ]
    got = {}
    for inst in convex:
        got[inst.name] = (solve_greedy_merge(inst).k, solve_cliquecover(inst).k, solve_setcover(inst).k)
    ell = instance("lshape", L_OUTER)
    ell_k = (solve_cliquecover(ell).k, solve_setcover(ell).k)
    dt = time.perf_counter() - t0
    ok = all(v == (1, 1, 1) for v in got.values()) and ell_k == (2, 2) and dt < 10
    criterion(6, ok, f"convex={got}, lshape={ell_k}, {dt:.1f}s")


# --- 7 ---------------------------------------------------------------------

def test_criterion_7_determinism(criterion, tmp_path):
    mismatches = []
    cheese = CheeseParams(target_holes=6, field_width=500, field_height=500, hole_radius=25, seed=17)
    maze = MazeParams(grid_cols=5, grid_rows=4, seed=17)
    for kind, params in (("cheese", cheese), ("ccheese", cheese), ("maze", maze)):
        a = serialize_instance(GENERATORS[kind](params))
        b = serialize_instance(GENERATORS[kind](params))
        if a != b:
            mismatches.append(kind)

    inst = parse_instance(serialize_instance(gen_cheese(cheese)))
    for name, solve in (
        ("greedy", lambda: solve_greedy_merge(inst, seed=4)),
        ("cliquecover", lambda: solve_cliquecover(inst, SteinerPolicy.EDGE_EXTENSIONS, seed=4)),
        ("setcover", lambda: solve_setcover(inst)),
    ):
        if serialize_solution(solve()) != serialize_solution(solve()):
            mismatches.append(name)
    one = solve_greedy_merge(inst, seed=4, restarts=5, workers=1)
    four = solve_greedy_merge(inst, seed=4, restarts=5, workers=4)
    if serialize_solution(one) != serialize_solution(four):
        mismatches.append("greedy restarts")

    (tmp_path / "w1").mkdir()
    (tmp_path / "w4").mkdir()
    bench_rows(SMOKE, seed=2, out_dir=tmp_path / "w1", workers=1)
    bench_rows(SMOKE, seed=2, out_dir=tmp_path / "w4", workers=4)
    files = sorted(p.relative_to(tmp_path / "w1") for p in (tmp_path / "w1").glob("*/*.json"))
    for rel in files:
        if (tmp_path / "w1" / rel).read_bytes() != (tmp_path / "w4" / rel).read_bytes():
            mismatches.append(f"pool {rel}")
    criterion(7, not mismatches and len(files) == 9,
              f"3 generators, 3 solvers, {len(files)} pooled outputs, mismatches={mismatches}")


# --- 8 ---------------------------------------------------------------------

def test_criterion_8_euler_identity(criterion):
    bad = []
    paths = sorted(SUITE.glob("*.json"))
    for path in paths:
        region = parse_instance(path.read_bytes()).region
        h = len(region.holes)
        mesh = triangulate(region)
        # no Steiner points: every vertex is on the boundary
        if len(mesh.triangles) != vertex_count(region) + 2 * h - 2 or mesh.area() != region.area():
            bad.append(path.stem)
            continue
        mesh = triangulate(region, steiner_points(region, SteinerPolicy.EDGE_EXTENSIONS))
        if len(mesh.triangles) != mesh.euler_count() or mesh.area() != region.area():
            bad.append(path.stem + " (steiner)")
    criterion(8, len(paths) >= 60 and not bad, f"{len(paths)} instances, failures={bad}")
