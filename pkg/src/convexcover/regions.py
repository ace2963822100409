"""Polygons with holes: validation, point location, piece containment and
exact difference by a convex piece."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .geometry import (
    GeometryError,
    Location,
    Point,
    bbox,
    canonicalize,
    clip_halfplane,
    edge_lines,
    orient,
    point_in_convex,
    point_in_polygon,
    rat,
    segment_meets_open_convex,
    segments_intersect,
    twice_signed_area,
    vertex_mean,
)


class InvalidRegion(GeometryError):
    pass


class EdgeIndex:
    """Uniform grid over segment bounding boxes.

    Bucketing uses doubles; float rounding is monotone, so a query never
    misses a segment whose exact bounding box overlaps the query box.
    """

    def __init__(self, segments: Sequence[tuple[Point, Point]]):
        self.segments = list(segments)
        if not self.segments:
            self.cell = 1.0
            self.x0 = self.y0 = 0.0
            self.grid: dict = {}
            return
        xs = [float(c) for s in self.segments for c in (s[0][0], s[1][0])]
        ys = [float(c) for s in self.segments for c in (s[0][1], s[1][1])]
        self.x0, self.y0 = min(xs), min(ys)
        span = max(max(xs) - self.x0, max(ys) - self.y0, 1e-9)
        self.cell = span / max(1, int(math.sqrt(len(self.segments))))
        grid = defaultdict(list)
        for k, (a, b) in enumerate(self.segments):
            i0, j0, i1, j1 = self._cells(min(a[0], b[0]), min(a[1], b[1]), max(a[0], b[0]), max(a[1], b[1]))
            for i in range(i0, i1 + 1):
                for j in range(j0, j1 + 1):
                    grid[i, j].append(k)
        self.grid = dict(grid)
        self.fboxes = [(min(float(a[0]), float(b[0])), min(float(a[1]), float(b[1])),
                        max(float(a[0]), float(b[0])), max(float(a[1]), float(b[1])))
                       for a, b in self.segments]
        self.eps = 1e-9 * max(1.0, abs(self.x0), abs(self.y0), span)

    def _cells(self, xmin, ymin, xmax, ymax):
        c = self.cell
        return (math.floor((float(xmin) - self.x0) / c), math.floor((float(ymin) - self.y0) / c),
                math.floor((float(xmax) - self.x0) / c), math.floor((float(ymax) - self.y0) / c))

    def query(self, box) -> list[int]:
        """Indices of candidate segments for ``box``: every segment whose
        exact bounding box meets ``box`` is included, plus possibly a few
        that miss it by a rounding margin."""
        if not self.grid:
            return []
        i0, j0, i1, j1 = self._cells(*box)
        seen = set()
        out = []
        grid = self.grid
        fb = self.fboxes
        xmin, ymin, xmax, ymax = (float(v) for v in box)
        eps = self.eps
        xmin -= eps
        ymin -= eps
        xmax += eps
        ymax += eps
        for i in range(i0, i1 + 1):
            for j in range(j0, j1 + 1):
                for k in grid.get((i, j), ()):
                    if k in seen:
                        continue
                    seen.add(k)
                    b = fb[k]
                    if b[2] >= xmin and b[0] <= xmax and b[3] >= ymin and b[1] <= ymax:
                        out.append(k)
        out.sort()
        return out


@dataclass(frozen=True, eq=True)
class PolygonWithHoles:
    """Closed region: a counterclockwise outer loop minus clockwise holes."""

    outer: tuple[Point, ...]
    holes: tuple[tuple[Point, ...], ...] = field(default=())

    @property
    def loops(self) -> tuple[tuple[Point, ...], ...]:
        return (self.outer,) + self.holes

    def edges(self) -> list[tuple[Point, Point]]:
        out = []
        for loop in self.loops:
            n = len(loop)
            out.extend((loop[i - 1], loop[i]) for i in range(n))
        return out

    @cached_property
    def index(self) -> EdgeIndex:
        return EdgeIndex(self.edges())

    @cached_property
    def box(self):
        return bbox(self.outer)

    def area(self) -> Fraction | int:
        return rat(Fraction(sum(twice_signed_area(loop) for loop in self.loops), 2))

    def vertices(self) -> list[Point]:
        return [p for loop in self.loops for p in loop]


def make_region(outer: Iterable[Point], holes: Iterable[Iterable[Point]] = ()) -> PolygonWithHoles:
    """Build a region, orienting the outer loop CCW and the holes CW."""
    outer = list(outer)
    if twice_signed_area(outer) < 0:
        outer.reverse()
    hs = []
    for h in holes:
        h = list(h)
        if twice_signed_area(h) > 0:
            h.reverse()
        hs.append(tuple(h))
    return PolygonWithHoles(tuple(outer), tuple(hs))


def _sweep_pairs(segments: Sequence[tuple[Point, Point]]):
    """Yield index pairs of segments whose bounding boxes overlap."""
    order = sorted(range(len(segments)), key=lambda k: min(segments[k][0][0], segments[k][1][0]))
    active: list[int] = []
    for k in order:
        a, b = segments[k]
        xmin = min(a[0], b[0])
        ylo, yhi = min(a[1], b[1]), max(a[1], b[1])
        active = [j for j in active if max(segments[j][0][0], segments[j][1][0]) >= xmin]
        for j in active:
            c, d = segments[j]
            if max(c[1], d[1]) >= ylo and min(c[1], d[1]) <= yhi:
                yield j, k
        active.append(k)


def validate_region(region: PolygonWithHoles) -> None:
    """Raise :class:`InvalidRegion` unless the loops are simple, correctly
    oriented, pairwise disjoint, and every hole lies strictly inside the
    outer loop."""
    loops = region.loops
    for k, loop in enumerate(loops):
        if len(loop) < 3:
            raise InvalidRegion(f"loop {k} has fewer than 3 vertices")
        a2 = twice_signed_area(loop)
        if a2 == 0:
            raise InvalidRegion(f"loop {k} has zero area")
        if (a2 > 0) != (k == 0):
            raise InvalidRegion(f"loop {k} has the wrong orientation")
    segs = []
    owner = []
    for k, loop in enumerate(loops):
        n = len(loop)
        for i in range(n):
            if loop[i - 1] == loop[i]:
                raise InvalidRegion(f"loop {k} repeats vertex {loop[i]}")
            segs.append((loop[i - 1], loop[i]))
            owner.append((k, i, n))
    for j, k in _sweep_pairs(segs):
        lj, ij, nj = owner[j]
        lk, ik, nk = owner[k]
        a, b = segs[j]
        c, d = segs[k]
        if lj == lk and (ij - ik) % nj in (1, nj - 1):
            # consecutive edges share exactly one endpoint; reject fold-backs
            shared = b if b in (c, d) else a
            p = a if shared == b else b
            q = d if shared == c else c
            if orient(p, shared, q) == 0 and (
                    (p[0] - shared[0]) * (q[0] - shared[0]) + (p[1] - shared[1]) * (q[1] - shared[1]) > 0):
                raise InvalidRegion(f"loop {lj} folds back at {shared}")
            continue
        if segments_intersect(a, b, c, d):
            raise InvalidRegion(f"edges of loops {lj} and {lk} intersect near {a}")
    outer = region.outer
    for k, hole in enumerate(region.holes, start=1):
        if point_in_polygon(hole[0], outer) is not Location.INTERIOR:
            raise InvalidRegion(f"hole {k} is not inside the outer boundary")
    hole_boxes = [bbox(h) for h in region.holes]
    for i, hole in enumerate(region.holes):
        for j, other in enumerate(region.holes):
            if i == j:
                continue
            bi, bj = hole_boxes[i], hole_boxes[j]
            if bj[0] <= bi[0] and bi[2] <= bj[2] and bj[1] <= bi[1] and bi[3] <= bj[3]:
                if point_in_polygon(hole[0], other) is not Location.OUTSIDE:
                    raise InvalidRegion(f"hole {i + 1} lies inside hole {j + 1}")


def point_in_region(p: Point, region: PolygonWithHoles) -> Location:
    """Closed-region classification; hole interiors are outside."""
    px, py = p
    box = region.box
    if px < box[0] or px > box[2] or py < box[1] or py > box[3]:
        return Location.OUTSIDE
    index = region.index
    inside = False
    for k in index.query((px, py, box[2], py)):
        (ax, ay), (bx, by) = index.segments[k]
        if (ay > py) != (by > py):
            c = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
            if c == 0:
                return Location.BOUNDARY
            if (c > 0) == (by > ay):
                inside = not inside
        elif ay == py == by and min(ax, bx) <= px <= max(ax, bx):
            return Location.BOUNDARY
        elif (ax, ay) == (px, py) or (bx, by) == (px, py):
            return Location.BOUNDARY
    return Location.INTERIOR if inside else Location.OUTSIDE


def piece_contained(piece: Sequence[Point], region: PolygonWithHoles) -> bool:
    """True iff the closed convex ``piece`` lies inside the closed region.

    Containment holds exactly when no boundary edge meets the open interior
    of the piece and one interior point of the piece lies in the region.
    """
    piece = canonicalize(piece)
    if len(piece) < 3:
        raise InvalidRegion("degenerate piece")
    box = bbox(piece)
    rb = region.box
    if box[0] < rb[0] or box[1] < rb[1] or box[2] > rb[2] or box[3] > rb[3]:
        return False
    index = region.index
    lines = edge_lines(piece)
    for k in index.query(box):
        a, b = index.segments[k]
        if segment_meets_open_convex(a, b, piece, lines):
            return False
    return point_in_region(vertex_mean(piece), region) is not Location.OUTSIDE


def first_uncontained_point(piece: Sequence[Point], region: PolygonWithHoles) -> Point | None:
    """A point of ``piece`` outside the region, or ``None`` if contained."""
    piece = canonicalize(piece)
    for v in piece:
        if point_in_region(v, region) is Location.OUTSIDE:
            return v
    inner = vertex_mean(piece)
    if point_in_region(inner, region) is Location.OUTSIDE:
        return inner
    index = region.index
    for k in index.query(bbox(piece)):
        a, b = index.segments[k]
        if not segment_meets_open_convex(a, b, piece):
            continue
        # The boundary crosses the piece; probe both sides of the crossing
        # edge near a point inside the piece.
        for p in _probe_points(a, b, piece):
            if point_in_convex(p, piece) is Location.INTERIOR and \
                    point_in_region(p, region) is Location.OUTSIDE:
                return p
    return None


def _probe_points(a: Point, b: Point, piece):
    ex, ey = b[0] - a[0], b[1] - a[1]
    scale = Fraction(1, 2)
    for _ in range(64):
        for t in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 7), Fraction(6, 7)):
            m = Point(rat(a[0] + t * ex), rat(a[1] + t * ey))
            for s in (scale, -scale):
                yield Point(rat(m[0] - s * ey), rat(m[1] + s * ex))
        scale /= 4
    # endpoints can sit inside the piece when the edge is short
    yield a
    yield b


# --- exact boundary arrangement -------------------------------------------

def _line_key(p: Point, q: Point):
    a = q[1] - p[1]
    b = p[0] - q[0]
    c = a * p[0] + b * p[1]
    den = 1
    for v in (a, b, c):
        if isinstance(v, Fraction):
            den = den * v.denominator // math.gcd(den, v.denominator)
    a, b, c = int(a * den), int(b * den), int(c * den)
    g = math.gcd(math.gcd(abs(a), abs(b)), abs(c))
    a, b, c = a // g, b // g, c // g
    if a < 0 or (a == 0 and b < 0):
        a, b, c = -a, -b, -c
    return a, b, c


def normalize_edges(edges: Iterable[tuple[Point, Point]]) -> list[tuple[Point, Point]]:
    """Cancel opposite overlapping edges of a directed edge multiset.

    The input represents the boundary of a region with winding numbers in
    {0, 1}; the output lists the elementary boundary edges with net
    multiplicity one.
    """
    groups = defaultdict(list)
    for p, q in edges:
        if p == q:
            continue
        groups[_line_key(p, q)].append((p, q))
    out = []
    for (a, b, _c), segs in sorted(groups.items()):
        events = defaultdict(int)
        where = {}
        for p, q in segs:
            sp = -b * p[0] + a * p[1]
            sq = -b * q[0] + a * q[1]
            where[sp] = p
            where[sq] = q
            if sp < sq:
                events[sp] += 1
                events[sq] -= 1
            else:
                events[sq] -= 1
                events[sp] += 1
        keys = sorted(events)
        level = 0
        for s0, s1 in zip(keys, keys[1:]):
            level += events[s0]
            if level == 0:
                continue
            p, q = where[s0], where[s1]
            if level > 0:
                out.extend([(p, q)] * level)
            else:
                out.extend([(q, p)] * (-level))
    return out


def _cw_first(ref, candidates):
    """Index of the direction reached first when rotating clockwise from
    ``ref`` (exclusive)."""

    def bucket(d):
        c = ref[0] * d[1] - ref[1] * d[0]
        if c < 0:
            return 0
        if c == 0:
            return 1 if ref[0] * d[0] + ref[1] * d[1] < 0 else 3
        return 2

    best = None
    best_b = None
    for k, d in enumerate(candidates):
        b = bucket(d)
        if best is None or b < best_b:
            best, best_b = k, b
            continue
        if b == best_b and b in (0, 2):
            bd = candidates[best]
            if bd[0] * d[1] - bd[1] * d[0] > 0:
                best = k
    return best


def trace_loops(edges: Sequence[tuple[Point, Point]]) -> list[list[Point]]:
    """Split a balanced directed edge set into closed loops, keeping the
    region on the left and separating loops at pinch vertices."""
    outgoing = defaultdict(list)
    for k, (p, _q) in enumerate(edges):
        outgoing[p].append(k)
    used = [False] * len(edges)
    loops = []
    for start in range(len(edges)):
        if used[start]:
            continue
        loop = []
        cur = start
        while True:
            used[cur] = True
            p, q = edges[cur]
            loop.append(p)
            outs = outgoing[q]
            if len(outs) == 1:
                nxt = outs[0]
            else:
                ref = (p[0] - q[0], p[1] - q[1])
                dirs = [(edges[k][1][0] - q[0], edges[k][1][1] - q[1]) for k in outs]
                nxt = outs[_cw_first(ref, dirs)]
            if nxt == start:
                break
            if used[nxt]:
                raise GeometryError("inconsistent boundary arrangement")
            cur = nxt
        loops.append(loop)
    return loops


def _simplify_loop(loop: list[Point]) -> list[Point]:
    pts = loop
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        n = len(pts)
        keep = [orient(pts[i - 1], pts[i], pts[(i + 1) % n]) != 0 for i in range(n)]
        if not all(keep):
            pts = [p for p, k in zip(pts, keep) if k]
            changed = True
    return pts


def assemble_regions(edges: Iterable[tuple[Point, Point]]) -> list[PolygonWithHoles]:
    """Regions bounded by a directed edge multiset (region on the left)."""
    loops = [_simplify_loop(l) for l in trace_loops(normalize_edges(edges))]
    outers = []
    holes = []
    for loop in loops:
        if len(loop) < 3:
            continue
        a2 = twice_signed_area(loop)
        if a2 > 0:
            outers.append((a2, loop))
        elif a2 < 0:
            holes.append(loop)
    outers.sort(key=lambda t: (t[0], t[1][0]))
    assigned = defaultdict(list)
    for hole in holes:
        p, q = hole[0], hole[1]
        m = Point(rat(Fraction(p[0] + q[0], 2)), rat(Fraction(p[1] + q[1], 2)))
        for k, (_a2, loop) in enumerate(outers):
            if point_in_polygon(m, loop) is Location.INTERIOR:
                assigned[k].append(tuple(hole))
                break
        else:
            raise GeometryError("hole loop without an enclosing outer loop")
    out = [PolygonWithHoles(tuple(loop), tuple(assigned[k])) for k, (_a2, loop) in enumerate(outers)]
    out.sort(key=lambda r: min(r.outer))
    return out


def region_difference(region: PolygonWithHoles, piece: Sequence[Point]) -> list[PolygonWithHoles]:
    """``closure(region minus interior(piece))`` as regions with holes.

    The convex piece clips every boundary loop of the region (Sutherland-
    Hodgman per half-plane); the clipped loops bound ``region & piece``.
    Their reversed edges plus the region's edges bound the difference, and
    cancelling overlaps then tracing recovers the components.
    """
    piece = canonicalize(piece)
    if len(piece) < 3:
        raise InvalidRegion("degenerate piece")
    rb, pb = region.box, bbox(piece)
    if pb[0] >= rb[2] or rb[0] >= pb[2] or pb[1] >= rb[3] or rb[1] >= pb[3]:
        return [region]
    edges = region.edges()
    n = len(piece)
    for loop in region.loops:
        clipped = list(loop)
        for i in range(n):
            clipped = clip_halfplane(clipped, piece[i - 1], piece[i])
            if not clipped:
                break
        m = len(clipped)
        edges.extend((clipped[i], clipped[i - 1]) for i in range(m))
    return assemble_regions(edges)


def regions_area(regions: Iterable[PolygonWithHoles]):
    return rat(sum(Fraction(r.area()) for r in regions))
