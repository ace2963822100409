"""Visibility-graph clique cover pipeline: triangulate, connect triangles
whose joint hull stays inside the region, cover the graph with cliques,
turn cliques into hulls, repair hulls that leave the region, and prune
redundant pieces."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import (
    Point,
    area,
    bbox,
    bbox_overlap,
    canonicalize,
    centroid,
    convex_hull,
    edge_lines,
    orient,
    rat,
    segment_meets_open_convex,
)
from .model import Instance, Solution, solution_from_pieces
from .regions import PolygonWithHoles
from .rng import Rng
from .triangulate import SteinerPolicy, TriangulationMesh, steiner_points, triangulate
from .verify import Residual, covers


class NotACover(ValueError):
    pass


@dataclass
class VisibilityGraph:
    mesh: TriangulationMesh
    adj: list[set[int]] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.adj)

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], mesh=None) -> "VisibilityGraph":
        adj = [set() for _ in range(n)]
        for u, v in edges:
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return cls(mesh, adj)


class _Walker:
    """Mesh data for triangular expansion: integer-scaled coordinates and,
    per triangle, the neighbour across each edge or -1 where blocked."""

    def __init__(self, mesh: TriangulationMesh):
        self.mesh = mesh
        scale = math.lcm(*(c.denominator for p in mesh.points for c in p)) if mesh.points else 1
        self.scale = scale
        self.pts = [(int(p[0] * scale), int(p[1] * scale)) for p in mesh.points]
        self.open = []
        for t, tri in enumerate(mesh.triangles):
            row = []
            for k in range(3):
                nt = mesh.neighbors[t][k]
                u, v = tri[(k + 1) % 3], tri[(k + 2) % 3]
                row.append(-1 if nt < 0 or mesh.is_constrained(u, v) else nt)
            self.open.append(tuple(row))

    def visible(self, start: int, eye: Point, within=None) -> set[int]:
        ex, ey = Fraction(eye[0]) * self.scale, Fraction(eye[1]) * self.scale
        d = math.lcm(ex.denominator, ey.denominator)
        cx, cy = int(ex * d), int(ey * d)
        # orientation tests about the eye only need offsets from it
        rel = [(d * x - cx, d * y - cy) for x, y in self.pts]
        tris = self.mesh.triangles
        opened = self.open
        seen = {start}
        stack = []
        tri = tris[start]
        for k in range(3):
            t = opened[start][k]
            if t >= 0 and (within is None or t in within):
                u, v = tri[(k + 1) % 3], tri[(k + 2) % 3]
                stack.append((t, u, v, rel[u], rel[v]))
        while stack:
            t, eu, ev, right, left = stack.pop()
            seen.add(t)
            tri = tris[t]
            row = opened[t]
            for k in range(3):
                nt = row[k]
                if nt < 0 or (within is not None and nt not in within):
                    continue
                u, v = tri[(k + 1) % 3], tri[(k + 2) % 3]
                if (u == eu and v == ev) or (u == ev and v == eu):
                    continue
                p, q = rel[u], rel[v]
                o = p[0] * q[1] - p[1] * q[0]
                if o == 0:
                    continue
                if o < 0:
                    p, q = q, p
                r2 = p if right[0] * p[1] - right[1] * p[0] > 0 else right
                l2 = q if q[0] * left[1] - q[1] * left[0] > 0 else left
                if r2[0] * l2[1] - r2[1] * l2[0] > 0:
                    stack.append((nt, u, v, r2, l2))
        return seen


def visible_triangles(mesh: TriangulationMesh, start: int, eye: Point, within=None) -> set[int]:
    """Triangles with a 2D part visible from ``eye`` (strictly inside
    triangle ``start``), found by triangular expansion through unconstrained
    edges with open view cones. With ``within``, the walk never leaves that
    set of triangles."""
    return _Walker(mesh).visible(start, eye, within)


def pair_hull(mesh: TriangulationMesh, ids: Iterable[int]) -> tuple[Point, ...]:
    pts = mesh.points
    return convex_hull(pts[v] for t in ids for v in mesh.triangles[t])


def hull_inside(hull: Sequence[Point], region: PolygonWithHoles) -> bool:
    """Containment test for a hull already known to contain a piece of the
    region's interior: only boundary crossings need checking."""
    index = region.index
    lines = edge_lines(hull)
    for k in index.query(bbox(hull)):
        a, b = index.segments[k]
        if segment_meets_open_convex(a, b, hull, lines):
            return False
    return True


def _eyes(tri: Sequence[Point]) -> list[Point]:
    """The centroid and one point near each corner, all strictly inside."""
    out = [centroid(tri)]
    for k in range(3):
        a, b, c = tri[k], tri[k - 1], tri[k - 2]
        out.append(Point(rat(Fraction(8 * a[0] + b[0] + c[0], 10)), rat(Fraction(8 * a[1] + b[1] + c[1], 10))))
    return out


def candidate_pairs(mesh: TriangulationMesh) -> list[set[int]]:
    """For each triangle, the triangles seen from all of its eye points.

    If the hull of two triangles lies in the region, every point of one is
    visible from every interior point of the other, so true edges always
    survive this filter in both directions.
    """
    polys = mesh.polygons()
    walker = _Walker(mesh)
    seen = []
    for t, tri in enumerate(polys):
        eyes = _eyes(tri)
        vis = walker.visible(t, eyes[0])
        for eye in eyes[1:]:
            vis = walker.visible(t, eye, within=vis)
        seen.append(vis)
    return [{u for u in seen[t] if u != t and t in seen[u]} for t in range(len(polys))]


def build_visibility_graph(mesh: TriangulationMesh, region: PolygonWithHoles) -> VisibilityGraph:
    """Edge between two triangles iff the hull of their union lies in the
    region; only pairs passing the visibility filter get the exact test."""
    n = len(mesh.triangles)
    adj: list[set[int]] = [set() for _ in range(n)]
    polys = mesh.polygons()
    cand = candidate_pairs(mesh)
    for t in range(n):
        for u in sorted(cand[t]):
            if u > t and hull_inside(convex_hull(polys[t] + polys[u]), region):
                adj[t].add(u)
                adj[u].add(t)
    return VisibilityGraph(mesh, adj)


# --- clique cover -------------------------------------------------------------

def clique_cover(g: VisibilityGraph, seed: int = 0) -> list[set[int]]:
    """Greedy clique growth followed by a dissolve-and-redistribute pass."""
    n = g.n
    adj = g.adj
    rng = Rng(seed)
    rank = list(range(n))
    rng.shuffle(rank)
    uncovered = set(range(n))
    cliques: list[set[int]] = []
    while uncovered:
        v = min(uncovered, key=lambda u: (len(adj[u] & uncovered), rank[u], u))
        clique = {v}
        cand = set(adj[v])
        while cand:
            u = max(cand, key=lambda w: (len(adj[w] & cand), w in uncovered, -w))
            clique.add(u)
            cand &= adj[u]
        cliques.append(clique)
        uncovered -= clique
    return dissolve_cliques(cliques, adj)


def dissolve_cliques(cliques: list[set[int]], adj: Sequence[set[int]]) -> list[set[int]]:
    """Try to empty each clique, smallest first, by moving its vertices that
    no other clique covers into other cliques they are fully adjacent to."""
    cliques = [set(c) for c in cliques]
    alive = set(range(len(cliques)))
    member: dict[int, set[int]] = {}
    for i, c in enumerate(cliques):
        for v in c:
            member.setdefault(v, set()).add(i)
    improved = True
    while improved and len(alive) > 1:
        improved = False
        for i in sorted(alive, key=lambda i: (len(cliques[i]), min(cliques[i]))):
            moves: dict[int, set[int]] = {}
            ok = True
            for v in sorted(cliques[i]):
                if len(member[v]) > 1:
                    continue
                nbrs = adj[v]
                homes = {j for w in nbrs for j in member[w]}
                homes.discard(i)
                best = None
                for j in sorted(homes, key=lambda j: (len(cliques[j]) + len(moves.get(j, ())), j)):
                    if cliques[j] <= nbrs and moves.get(j, set()) <= nbrs:
                        best = j
                        break
                if best is None:
                    ok = False
                    break
                moves.setdefault(best, set()).add(v)
            if not ok:
                continue
            for v in cliques[i]:
                member[v].discard(i)
            for j, vs in moves.items():
                cliques[j] |= vs
                for v in vs:
                    member[v].add(j)
            alive.discard(i)
            improved = True
            break
    out = [cliques[i] for i in alive]
    out.sort(key=sorted)
    return out


def clique_to_piece(clique: Iterable[int], mesh: TriangulationMesh) -> tuple[Point, ...]:
    return pair_hull(mesh, clique)


def repair_pieces(cliques: Sequence[Iterable[int]], region: PolygonWithHoles,
                  mesh: TriangulationMesh) -> list[tuple[Point, ...]]:
    """Hull of every clique, splitting cliques whose full hull leaves the
    region into greedily grown sub-cliques that stay inside."""
    out = []
    for clique in cliques:
        members = sorted(clique)
        hull = pair_hull(mesh, members)
        if hull_inside(hull, region):
            out.append(hull)
            continue
        remaining = members
        while remaining:
            sub = [remaining[0]]
            rest = []
            for t in remaining[1:]:
                h = pair_hull(mesh, sub + [t])
                if hull_inside(h, region):
                    sub.append(t)
                else:
                    rest.append(t)
            out.append(pair_hull(mesh, sub))
            remaining = rest
    return out


def prune_redundant(pieces: Sequence[Sequence[Point]], region: PolygonWithHoles,
                    check_cover: bool = True) -> list[tuple[Point, ...]]:
    """Drop pieces covered by the others, largest first, until no single
    piece can be removed."""
    pieces = [canonicalize(p) for p in pieces]
    if check_cover and not covers(region, pieces):
        raise NotACover("pieces do not cover the region")
    order = sorted(range(len(pieces)), key=lambda i: (-area(pieces[i]), pieces[i]))
    boxes = [bbox(p) for p in pieces]
    alive = [True] * len(pieces)
    for i in order:
        res = Residual([pieces[i]])
        box = boxes[i]
        for j in range(len(pieces)):
            if j == i or not alive[j] or not bbox_overlap(box, boxes[j]):
                continue
            res.subtract(pieces[j])
            if res.is_empty():
                break
        if res.is_empty():
            alive[i] = False
    return [pieces[i] for i in range(len(pieces)) if alive[i]]


def solve_cliquecover(inst: Instance, policy: SteinerPolicy | str = SteinerPolicy.NONE,
                      seed: int = 0) -> Solution:
    region = inst.region
    mesh = triangulate(region, steiner_points(region, SteinerPolicy(policy)))
    graph = build_visibility_graph(mesh, region)
    cliques = clique_cover(graph, seed)
    pieces = repair_pieces(cliques, region, mesh)
    pieces = prune_redundant(pieces, region)
    return solution_from_pieces(inst.name, pieces)
