"""Baseline: greedily merge faces of a triangulation into convex pieces."""

from __future__ import annotations

from functools import partial

from .geometry import orient
from .model import Instance, Solution, solution_from_pieces
from .parallel import pmap
from .rng import Rng, derive_seed
from .triangulate import TriangulationMesh, triangulate


def _shared_run(a: list[int], owner_b: set[tuple[int, int]]):
    """Positions in face ``a`` where its shared chain with ``b`` starts and
    ends, as (start index, end index) into ``a``; ``None`` if not adjacent."""
    n = len(a)
    shared = [(a[(i + 1) % n], a[i]) in owner_b for i in range(n)]
    if not any(shared):
        return None
    if all(shared):
        raise ValueError("faces coincide")
    # the run begins right after a non-shared edge
    start = next(i for i in range(n) if shared[i] and not shared[i - 1])
    end = start
    while shared[end % n]:
        end += 1
    return start % n, end % n


def try_merge(fa: list[int], fb: list[int], points) -> list[int] | None:
    """Union of two edge-adjacent convex faces if it is convex, else None."""
    eb = {(fb[i], fb[(i + 1) % len(fb)]) for i in range(len(fb))}
    run = _shared_run(fa, eb)
    if run is None:
        return None
    s_i, e_i = run
    s, e = fa[s_i], fa[e_i]
    nb = len(fb)
    jb_s = fb.index(s)
    jb_e = fb.index(e)
    # union: fa from e around to s, then fb from s around to e (exclusive)
    out = []
    i = e_i
    while True:
        out.append(fa[i])
        if i == s_i:
            break
        i = (i + 1) % len(fa)
    j = (jb_s + 1) % nb
    while j != jb_e:
        out.append(fb[j])
        j = (j + 1) % nb
    m = len(out)
    ks = out.index(s)
    ke = out.index(e)
    for k in (ks, ke):
        if orient(points[out[k - 1]], points[out[k]], points[out[(k + 1) % m]]) < 0:
            return None
    return out


def greedy_merge_faces(mesh: TriangulationMesh, seed: int) -> list[list[int]]:
    """Merge edge-adjacent faces in seeded random order until a full pass
    over all adjacent pairs produces no merge."""
    rng = Rng(seed)
    points = mesh.points
    faces: dict[int, list[int]] = {t: list(tri) for t, tri in enumerate(mesh.triangles)}
    owner: dict[tuple[int, int], int] = {}
    for f, face in faces.items():
        n = len(face)
        for i in range(n):
            owner[face[i], face[(i + 1) % n]] = f

    def pairs() -> list[tuple[int, int]]:
        out = set()
        for (u, v), f in owner.items():
            g = owner.get((v, u))
            if g is not None and f < g and not mesh.is_constrained(u, v):
                out.add((f, g))
        return sorted(out)

    while True:
        todo = pairs()
        rng.shuffle(todo)
        merged_any = False
        for f, g in todo:
            if f not in faces or g not in faces:
                continue
            union = try_merge(faces[f], faces[g], points)
            if union is None:
                continue
            for face in (faces[f], faces[g]):
                n = len(face)
                for i in range(n):
                    owner.pop((face[i], face[(i + 1) % n]), None)
            del faces[g]
            faces[f] = union
            n = len(union)
            for i in range(n):
                owner[union[i], union[(i + 1) % n]] = f
            merged_any = True
        if not merged_any:
            break
    return [faces[f] for f in sorted(faces)]


def _one_run(mesh: TriangulationMesh, seed: int) -> list[tuple]:
    faces = greedy_merge_faces(mesh, seed)
    return [tuple(mesh.points[i] for i in face) for face in faces]


def solve_greedy_merge(inst: Instance, seed: int = 0, restarts: int = 1,
                       workers: int | None = None, mesh: TriangulationMesh | None = None) -> Solution:
    """Best of ``restarts`` seeded greedy merge runs (fewest pieces, ties to
    the earliest restart)."""
    if mesh is None:
        mesh = triangulate(inst.region)
    seeds = [derive_seed(seed, r) for r in range(max(1, restarts))]
    results = pmap(partial(_one_run, mesh), seeds, workers)
    best = min(range(len(results)), key=lambda r: (len(results[r]), r))
    return solution_from_pieces(inst.name, results[best])
