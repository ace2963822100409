from collections import Counter

from conftest import instance, poly
from oracles import load_frozen
from convexcover.generators import CheeseParams, MazeParams, gen_cheese, gen_maze
from convexcover.geometry import area, convex_intersection, is_convex
from convexcover.greedy import solve_greedy_merge, try_merge
from convexcover.model import serialize_solution
from convexcover.regions import piece_contained
from convexcover.triangulate import triangulate
from convexcover.verify import verify_solution


def test_convex_instance_one_piece():
    inst = instance("oct", poly((2, 0), (5, 0), (7, 2), (7, 5), (5, 7), (2, 7), (0, 5), (0, 2)))
    for seed in range(8):
        assert solve_greedy_merge(inst, seed=seed).k == 1


def test_lshape_counts_match_exhaustive_merge_orders(lshape):
    allowed = set(load_frozen()["lshape_merge_outcomes"])
    assert allowed == {2, 3}
    seen = Counter(solve_greedy_merge(lshape, seed=s).k for s in range(64))
    assert set(seen) <= allowed


def test_try_merge():
    pts = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]
    assert sorted(try_merge([1, 2, 3], [0, 1, 3], pts)) == [0, 1, 2, 3]
    # the two arm quads meet along the diagonal and would form the L
    assert try_merge([0, 1, 2, 3], [0, 3, 4, 5], pts) is None
    # no shared edge
    assert try_merge([1, 2, 3], [3, 4, 5], pts) is None


def test_partition_properties():
    for seed in range(10):
        inst = gen_cheese(CheeseParams(target_holes=4, field_width=300, field_height=300, hole_radius=20, seed=seed))
        mesh = triangulate(inst.region)
        sol = solve_greedy_merge(inst, seed=seed, mesh=mesh)
        assert sol.k <= len(mesh.triangles)
        assert sum(area(p) for p in sol.pieces) == inst.region.area()
        for p in sol.pieces:
            assert is_convex(p) and piece_contained(p, inst.region)
        for i in range(sol.k):
            for j in range(i + 1, sol.k):
                inter = convex_intersection(sol.pieces[i], sol.pieces[j])
                assert inter is None or area(inter) == 0
        assert verify_solution(inst, sol).valid


def test_deterministic_and_restarts_help():
    inst = gen_maze(MazeParams(grid_cols=4, grid_rows=4, seed=9))
    one = solve_greedy_merge(inst, seed=3)
    assert serialize_solution(one) == serialize_solution(solve_greedy_merge(inst, seed=3))
    best = solve_greedy_merge(inst, seed=3, restarts=6, workers=1)
    assert best.k <= one.k
    assert serialize_solution(best) == serialize_solution(solve_greedy_merge(inst, seed=3, restarts=6, workers=4))
