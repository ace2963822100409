"""Constrained triangulation of polygons with holes, plus Steiner-point
policies derived from maximal edge extensions."""

from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import (
    GeometryError,
    Location,
    Point,
    incircle,
    on_segment,
    orient,
    point_in_polygon,
    rat,
    twice_signed_area,
)
from .regions import PolygonWithHoles, point_in_region, trace_loops


class PointOutsideRegion(GeometryError):
    pass


class SteinerPolicy(enum.Enum):
    NONE = "none"
    EDGE_EXTENSIONS = "ext"
    EXTENSION_INTERSECTIONS = "extx"


@dataclass
class TriangulationMesh:
    points: list[Point]
    triangles: list[tuple[int, int, int]]
    # neighbors[t][i] is the triangle across the edge opposite vertex i, or -1
    neighbors: list[tuple[int, int, int]]
    constrained_edges: set[tuple[int, int]]
    boundary_points: set[int]
    hole_count: int

    def triangle_points(self, t: int) -> tuple[Point, Point, Point]:
        a, b, c = self.triangles[t]
        return self.points[a], self.points[b], self.points[c]

    def polygons(self) -> list[tuple[Point, Point, Point]]:
        return [self.triangle_points(t) for t in range(len(self.triangles))]

    def area(self):
        return rat(Fraction(sum(twice_signed_area(p) for p in self.polygons()), 2))

    def is_constrained(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.constrained_edges

    def euler_count(self) -> int:
        """Triangle count predicted by the Euler relation."""
        v_bnd = len(self.boundary_points)
        v_int = len(self.points) - v_bnd
        return 2 * v_int + v_bnd + 2 * self.hole_count - 2


# --- Steiner points --------------------------------------------------------

def _ray_hit(origin: Point, direction, segments, skip: Point):
    """First point where the ray leaves ``origin`` and touches a segment."""
    best_t = None
    best = None
    dx, dy = direction
    for a, b in segments:
        if a == skip or b == skip:
            continue
        ex, ey = b[0] - a[0], b[1] - a[1]
        den = dx * ey - dy * ex
        wx, wy = a[0] - origin[0], a[1] - origin[1]
        if den == 0:
            if wx * dy - wy * dx != 0:
                continue
            # collinear: nearest endpoint ahead of the origin
            for p in (a, b):
                t = Fraction((p[0] - origin[0]) * dx + (p[1] - origin[1]) * dy, dx * dx + dy * dy)
                if t > 0 and (best_t is None or t < best_t):
                    best_t, best = t, p
            continue
        t = Fraction(wx * ey - wy * ex, den)
        s = Fraction(wx * dy - wy * dx, den)
        if t > 0 and 0 <= s <= 1 and (best_t is None or t < best_t):
            best_t = t
            best = Point(rat(origin[0] + t * dx), rat(origin[1] + t * dy))
    return best


def extension_segments(region: PolygonWithHoles) -> list[tuple[Point, Point]]:
    """Maximal extensions past reflex vertices, as (reflex vertex, far end)."""
    edges = region.edges()
    out = []
    for loop in region.loops:
        n = len(loop)
        for i in range(n):
            u, v, w = loop[i - 1], loop[i], loop[(i + 1) % n]
            if orient(u, v, w) >= 0:
                continue
            for d in ((v[0] - u[0], v[1] - u[1]), (v[0] - w[0], v[1] - w[1])):
                hit = _ray_hit(v, d, edges, v)
                if hit is not None:
                    out.append((v, hit))
    return out


def steiner_points(region: PolygonWithHoles, policy: SteinerPolicy) -> list[Point]:
    policy = SteinerPolicy(policy)
    if policy is SteinerPolicy.NONE:
        return []
    exts = extension_segments(region)
    found = {hit for _v, hit in exts}
    if policy is SteinerPolicy.EXTENSION_INTERSECTIONS:
        from .regions import _sweep_pairs
        from .geometry import line_intersection, segments_cross_properly, on_segment
        for i, j in _sweep_pairs(exts):
            a, b = exts[i]
            c, d = exts[j]
            if orient(a, b, c) == 0 and orient(a, b, d) == 0:
                continue
            if segments_cross_properly(a, b, c, d) or on_segment(c, a, b) or on_segment(d, a, b) \
                    or on_segment(a, c, d) or on_segment(b, c, d):
                p = line_intersection(a, b, c, d)
                if point_in_region(p, region) is Location.INTERIOR:
                    found.add(p)
    existing = set(region.vertices())
    return sorted(p for p in found if p not in existing)


# --- monotone decomposition --------------------------------------------------

def _above(p: Point, q: Point) -> bool:
    return p[1] > q[1] or (p[1] == q[1] and p[0] < q[0])


def _order_key(p: Point):
    return (-p[1], p[0])


def _monotone_faces(loops: Sequence[Sequence[Point]]) -> list[list[Point]]:
    """Split the region bounded by ``loops`` (region on the left) into
    y-monotone faces with the classic plane sweep."""
    pts: list[Point] = []
    nxt: list[int] = []
    prv: list[int] = []
    for loop in loops:
        base = len(pts)
        n = len(loop)
        pts.extend(loop)
        nxt.extend(base + (i + 1) % n for i in range(n))
        prv.extend(base + (i - 1) % n for i in range(n))
    order = sorted(range(len(pts)), key=lambda i: _order_key(pts[i]))

    START, END, SPLIT, MERGE, REGULAR = range(5)
    kind = []
    for i, v in enumerate(pts):
        u, w = pts[prv[i]], pts[nxt[i]]
        ub, wb = _above(v, u), _above(v, w)
        convex = orient(u, v, w) > 0
        if ub and wb:
            kind.append(START if convex else SPLIT)
        elif not ub and not wb:
            kind.append(END if convex else MERGE)
        else:
            kind.append(REGULAR)

    status: dict[int, int] = {}  # edge id (its upper... source vertex) -> helper vertex
    diagonals: list[tuple[int, int]] = []

    def left_edge(i: int) -> int:
        v = pts[i]
        best = None
        best_x = None
        for e in status:
            a, b = pts[e], pts[nxt[e]]
            if a[1] == b[1]:
                continue
            x = a[0] + Fraction((v[1] - a[1]) * (b[0] - a[0]), b[1] - a[1])
            if x < v[0] and (best_x is None or x > best_x):
                best, best_x = e, x
        if best is None:
            raise GeometryError("sweep found no edge left of a vertex; invalid region")
        return best

    for i in order:
        k = kind[i]
        p = prv[i]
        if k == START:
            status[i] = i
        elif k == END:
            if kind[status[p]] == MERGE:
                diagonals.append((i, status[p]))
            del status[p]
        elif k == SPLIT:
            j = left_edge(i)
            diagonals.append((i, status[j]))
            status[j] = i
            status[i] = i
        elif k == MERGE:
            if kind[status[p]] == MERGE:
                diagonals.append((i, status[p]))
            del status[p]
            j = left_edge(i)
            if kind[status[j]] == MERGE:
                diagonals.append((i, status[j]))
            status[j] = i
        else:
            # interior lies to the right of v when the boundary runs downward
            if _above(pts[p], pts[i]):
                if kind[status[p]] == MERGE:
                    diagonals.append((i, status[p]))
                del status[p]
                status[i] = i
            else:
                j = left_edge(i)
                if kind[status[j]] == MERGE:
                    diagonals.append((i, status[j]))
                status[j] = i

    edges = [(pts[i], pts[nxt[i]]) for i in range(len(pts))]
    for a, b in diagonals:
        edges.append((pts[a], pts[b]))
        edges.append((pts[b], pts[a]))
    return trace_loops(edges)


def _triangulate_monotone(poly: Sequence[Point]) -> list[tuple[Point, Point, Point]]:
    n = len(poly)
    if n == 3:
        return [tuple(poly)]
    top = min(range(n), key=lambda i: _order_key(poly[i]))
    bottom = max(range(n), key=lambda i: _order_key(poly[i]))
    # counterclockwise from the top vertex walks down the left chain
    chain = {}
    i = top
    while i != bottom:
        chain[i] = 0
        i = (i + 1) % n
    chain[bottom] = 0
    i = (bottom + 1) % n
    while i != top:
        chain[i] = 1
        i = (i + 1) % n
    order = sorted(range(n), key=lambda i: _order_key(poly[i]))
    tris: list[tuple[Point, Point, Point]] = []

    def emit(a, b, c):
        pa, pb, pc = poly[a], poly[b], poly[c]
        o = orient(pa, pb, pc)
        if o == 0:
            raise _Degenerate()
        tris.append((pa, pb, pc) if o > 0 else (pa, pc, pb))

    stack = [order[0], order[1]]
    for j in range(2, n - 1):
        u = order[j]
        if chain[u] != chain[stack[-1]]:
            for a, b in zip(stack, stack[1:]):
                emit(u, a, b)
            stack = [stack[-1], u]
        else:
            last = stack.pop()
            while stack:
                s = stack[-1]
                if chain[u] == 0:
                    ok = orient(poly[s], poly[last], poly[u]) > 0
                else:
                    ok = orient(poly[u], poly[last], poly[s]) > 0
                if not ok:
                    break
                emit(s, last, u)
                last = stack.pop()
            stack.append(last)
            stack.append(u)
    u = order[n - 1]
    for a, b in zip(stack, stack[1:]):
        emit(u, a, b)
    return tris


class _Degenerate(Exception):
    pass


def _ear_clip(poly: Sequence[Point]) -> list[tuple[Point, Point, Point]]:
    """Quadratic ear clipping; only used when the monotone pass meets a
    collinear configuration it cannot split."""
    pts = list(poly)
    tris = []
    while len(pts) > 3:
        n = len(pts)
        for i in range(n):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
            if orient(a, b, c) <= 0:
                continue
            blocked = False
            for q in pts:
                if q in (a, b, c):
                    continue
                if orient(a, b, q) >= 0 and orient(b, c, q) >= 0 and orient(c, a, q) >= 0:
                    blocked = True
                    break
            if not blocked:
                tris.append((a, b, c))
                del pts[i]
                break
        else:
            raise GeometryError("ear clipping stalled")
    if orient(*pts) > 0:
        tris.append(tuple(pts))
    return tris


def _split_boundary(region: PolygonWithHoles, extra: Sequence[Point]):
    """Insert extra points lying on boundary edges into the loops."""
    on_edge = defaultdict(list)
    interior = []
    index = region.index
    verts = set(region.vertices())
    for p in extra:
        if p in verts:
            continue
        loc = point_in_region(p, region)
        if loc is Location.OUTSIDE:
            raise PointOutsideRegion(f"{p} is outside the region")
        if loc is Location.INTERIOR:
            interior.append(p)
            continue
        for k in index.query((p[0], p[1], p[0], p[1])):
            a, b = index.segments[k]
            if on_segment(p, a, b):
                on_edge[a, b].append(p)
                break
    loops = []
    for loop in region.loops:
        n = len(loop)
        out = []
        for i in range(n):
            a, b = loop[i], loop[(i + 1) % n]
            out.append(a)
            mids = on_edge.get((a, b))
            if mids:
                mids.sort(key=lambda q: (q[0] - a[0]) ** 2 + (q[1] - a[1]) ** 2)
                out.extend(mids)
        loops.append(out)
    return loops, interior


def triangulate(region: PolygonWithHoles, extra_points: Iterable[Point] = ()) -> TriangulationMesh:
    """Constrained (best-effort Delaunay) triangulation of ``region`` using
    its vertices plus ``extra_points``."""
    extra = sorted(set(extra_points))
    loops, interior = _split_boundary(region, extra)
    tris: list[tuple[Point, Point, Point]] = []
    for face in _monotone_faces(loops):
        if len(face) < 3:
            continue
        try:
            tris.extend(_triangulate_monotone(face))
        except _Degenerate:
            tris.extend(_ear_clip(face))
    builder = _MeshBuilder(loops, tris)
    for p in interior:
        builder.insert(p)
    builder.legalize()
    return builder.finish(len(region.holes))


class _MeshBuilder:
    def __init__(self, loops, tris):
        self.points: list[Point] = []
        self.index: dict[Point, int] = {}
        self.constrained: set[tuple[int, int]] = set()
        for loop in loops:
            for p in loop:
                self._pid(p)
        for loop in loops:
            n = len(loop)
            for i in range(n):
                u, v = self.index[loop[i]], self.index[loop[(i + 1) % n]]
                self.constrained.add((min(u, v), max(u, v)))
        self.boundary = set(range(len(self.points)))
        self.tris: list[list[int] | None] = []
        self.owner: dict[tuple[int, int], int] = {}
        for a, b, c in tris:
            self._add([self._pid(a), self._pid(b), self._pid(c)])

    def _pid(self, p: Point) -> int:
        k = self.index.get(p)
        if k is None:
            k = len(self.points)
            self.points.append(p)
            self.index[p] = k
        return k

    def _add(self, tri: list[int]) -> int:
        t = len(self.tris)
        self.tris.append(tri)
        a, b, c = tri
        self.owner[a, b] = t
        self.owner[b, c] = t
        self.owner[c, a] = t
        return t

    def _remove(self, t: int) -> None:
        a, b, c = self.tris[t]
        for e in ((a, b), (b, c), (c, a)):
            if self.owner.get(e) == t:
                del self.owner[e]
        self.tris[t] = None

    def insert(self, p: Point) -> None:
        if p in self.index:
            return
        pts = self.points
        for t, tri in enumerate(self.tris):
            if tri is None:
                continue
            a, b, c = tri
            pa, pb, pc = pts[a], pts[b], pts[c]
            o1, o2, o3 = orient(pa, pb, p), orient(pb, pc, p), orient(pc, pa, p)
            if o1 < 0 or o2 < 0 or o3 < 0:
                continue
            k = self._pid(p)
            if o1 and o2 and o3:
                self._remove(t)
                self._add([a, b, k])
                self._add([b, c, k])
                self._add([c, a, k])
                return
            # on an interior edge: split both incident triangles
            u, v, w = (a, b, c) if o1 == 0 else (b, c, a) if o2 == 0 else (c, a, b)
            other = self.owner.get((v, u))
            self._remove(t)
            self._add([u, k, w])
            self._add([k, v, w])
            if other is not None:
                x = next(z for z in self.tris[other] if z not in (u, v))
                self._remove(other)
                self._add([v, k, x])
                self._add([k, u, x])
            return
        raise PointOutsideRegion(f"{p} is not inside any triangle")

    def legalize(self) -> None:
        pts = self.points
        stack = [e for e in self.owner if e[0] < e[1]]
        guard = 0
        limit = 50 * (len(self.owner) + 10) ** 2
        while stack:
            u, v = stack.pop()
            if (min(u, v), max(u, v)) in self.constrained:
                continue
            t1 = self.owner.get((u, v))
            t2 = self.owner.get((v, u))
            if t1 is None or t2 is None:
                continue
            c = next(z for z in self.tris[t1] if z not in (u, v))
            d = next(z for z in self.tris[t2] if z not in (u, v))
            pa, pb, pc, pd = pts[u], pts[v], pts[c], pts[d]
            if incircle(pa, pb, pc, pd) <= 0:
                continue
            if orient(pc, pd, pa) * orient(pc, pd, pb) >= 0:
                continue
            guard += 1
            if guard > limit:
                raise GeometryError("edge flipping did not terminate")
            self._remove(t1)
            self._remove(t2)
            # quad u, d, v, c in counterclockwise order; new diagonal c-d
            self._add([u, d, c])
            self._add([d, v, c])
            stack.extend([(u, d), (d, v), (v, c), (c, u)])

    def finish(self, holes: int) -> TriangulationMesh:
        live = [tri for tri in self.tris if tri is not None]
        # deterministic layout: rotate each triangle to its smallest index
        norm = []
        for a, b, c in live:
            r = min((a, b, c), (b, c, a), (c, a, b))
            norm.append(r)
        norm.sort()
        owner = {}
        for t, (a, b, c) in enumerate(norm):
            owner[a, b] = t
            owner[b, c] = t
            owner[c, a] = t
        neighbors = []
        for a, b, c in norm:
            neighbors.append((owner.get((c, b), -1), owner.get((a, c), -1), owner.get((b, a), -1)))
        return TriangulationMesh(
            points=list(self.points),
            triangles=[tuple(t) for t in norm],
            neighbors=neighbors,
            constrained_edges=set(self.constrained),
            boundary_points=set(self.boundary),
            hole_count=holes,
        )
