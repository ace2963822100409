"""Exact planar predicates and convex-polygon operations.

Coordinates are exact rationals. Integral values are kept as plain ``int``
(a rational with denominator 1) and everything else as
:class:`fractions.Fraction`; mixed arithmetic between the two is exact, and
:func:`rat` normalizes any result back to the canonical form.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, Union

Rational = Union[int, Fraction]


class GeometryError(ValueError):
    """Base class for geometric precondition failures."""


class InvalidPolygon(GeometryError):
    pass


class DegenerateHull(GeometryError):
    pass


def rat(value) -> Rational:
    """Canonical exact rational: ``int`` when integral, else a reduced ``Fraction``."""
    if isinstance(value, bool):
        raise TypeError("bool is not a coordinate")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, float):
        raise TypeError("floating-point coordinates are not accepted; use Fraction")
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else value


class Point(NamedTuple):
    x: Rational
    y: Rational

    @classmethod
    def of(cls, x, y) -> "Point":
        return cls(rat(x), rat(y))

    def __repr__(self) -> str:
        return f"Point({self.x}, {self.y})"


class Orientation(enum.IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


class Location(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def cross(o: Point, a: Point, b: Point) -> Rational:
    """Cross product ``(a - o) x (b - o)``."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def orient(p: Point, q: Point, r: Point) -> int:
    px, py = p
    qx, qy = q
    rx, ry = r
    if type(px) is int and type(py) is int and type(qx) is int and type(qy) is int \
            and type(rx) is int and type(ry) is int:
        c = (qx - px) * (ry - py) - (qy - py) * (rx - px)
        return (c > 0) - (c < 0)
    # Same determinant on numerators and denominators directly; Fraction
    # arithmetic would reduce every intermediate by a gcd.
    pxn, pxd = px.numerator, px.denominator
    pyn, pyd = py.numerator, py.denominator
    ax, ad = qx.numerator * pxd - pxn * qx.denominator, qx.denominator * pxd
    ay, ae = qy.numerator * pyd - pyn * qy.denominator, qy.denominator * pyd
    bx, bd = rx.numerator * pxd - pxn * rx.denominator, rx.denominator * pxd
    by, be = ry.numerator * pyd - pyn * ry.denominator, ry.denominator * pyd
    c = ax * by * ae * bd - ay * bx * ad * be
    return (c > 0) - (c < 0)


def _line(a: Point, b: Point) -> tuple[int, int, int]:
    """Integer coefficients of a positive multiple of ``cross(b - a, p - a)``
    as ``A*x + B*y + C``."""
    ex, ey = b[0] - a[0], b[1] - a[1]
    A, B, C = -ey, ex, ey * a[0] - ex * a[1]
    if type(A) is int and type(B) is int and type(C) is int:
        return A, B, C
    m = math.lcm(A.denominator, B.denominator, C.denominator)
    return (A.numerator * (m // A.denominator), B.numerator * (m // B.denominator),
            C.numerator * (m // C.denominator))


def _side(line, p: Point) -> tuple[int, int]:
    """Value of ``line`` at ``p`` as (numerator, positive denominator)."""
    A, B, C = line
    x, y = p
    if type(x) is int and type(y) is int:
        return A * x + B * y + C, 1
    xn, xd = x.numerator, x.denominator
    yn, yd = y.numerator, y.denominator
    return A * xn * yd + B * yn * xd + C * xd * yd, xd * yd


def orientation(p: Point, q: Point, r: Point) -> Orientation:
    return Orientation(orient(p, q, r))


def incircle(a: Point, b: Point, c: Point, d: Point) -> int:
    """Sign of the in-circle determinant; positive iff ``d`` is inside the
    circumcircle of the counterclockwise triangle ``abc``."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    det = ((adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
           + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
           + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady))
    return (det > 0) - (det < 0)


def twice_signed_area(poly: Sequence[Point]) -> Rational:
    n = len(poly)
    total = 0
    for i in range(n):
        x0, y0 = poly[i - 1]
        x1, y1 = poly[i]
        total += x0 * y1 - x1 * y0
    return total


def signed_area(poly: Sequence[Point]) -> Rational:
    """Exact shoelace area; positive iff counterclockwise."""
    return rat(Fraction(twice_signed_area(poly), 2))


def area(poly: Sequence[Point]) -> Rational:
    return abs(signed_area(poly))


def bbox(points: Iterable[Point]) -> tuple[Rational, Rational, Rational, Rational]:
    xs, ys = zip(*points)
    return min(xs), min(ys), max(xs), max(ys)


def bbox_overlap(a, b) -> bool:
    return a[0] <= b[2] and b[0] <= a[2] and a[1] <= b[3] and b[1] <= a[3]


def centroid(poly: Sequence[Point]) -> Point:
    """Area centroid of a simple polygon with nonzero area."""
    a2 = 0
    cx = cy = 0
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i - 1]
        x1, y1 = poly[i]
        w = x0 * y1 - x1 * y0
        a2 += w
        cx += (x0 + x1) * w
        cy += (y0 + y1) * w
    if a2 == 0:
        raise InvalidPolygon("centroid of a zero-area polygon")
    return Point(rat(Fraction(cx) / (3 * a2)), rat(Fraction(cy) / (3 * a2)))


def vertex_mean(poly: Sequence[Point]) -> Point:
    n = len(poly)
    return Point(rat(Fraction(sum(p[0] for p in poly), n)),
                 rat(Fraction(sum(p[1] for p in poly), n)))


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """Closed-segment membership of ``p`` on ``ab``."""
    if orient(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True iff closed segments ``ab`` and ``cd`` share at least one point."""
    if (max(a[0], b[0]) < min(c[0], d[0]) or max(c[0], d[0]) < min(a[0], b[0])
            or max(a[1], b[1]) < min(c[1], d[1]) or max(c[1], d[1]) < min(a[1], b[1])):
        return False
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return ((o1 == 0 and on_segment(c, a, b)) or (o2 == 0 and on_segment(d, a, b))
            or (o3 == 0 and on_segment(a, c, d)) or (o4 == 0 and on_segment(b, c, d)))


def segments_cross_properly(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True iff the segments cross at a single point interior to both."""
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    if o1 * o2 >= 0:
        return False
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    return o3 * o4 < 0


def line_intersection(a: Point, b: Point, c: Point, d: Point) -> Point:
    """Intersection of the (non-parallel) lines ``ab`` and ``cd``."""
    den = (b[0] - a[0]) * (d[1] - c[1]) - (b[1] - a[1]) * (d[0] - c[0])
    if den == 0:
        raise GeometryError("parallel lines")
    t = Fraction((c[0] - a[0]) * (d[1] - c[1]) - (c[1] - a[1]) * (d[0] - c[0]), den)
    return Point(rat(a[0] + t * (b[0] - a[0])), rat(a[1] + t * (b[1] - a[1])))


def point_in_polygon(p: Point, poly: Sequence[Point]) -> Location:
    """Exact classification of ``p`` against a simple polygon (either orientation)."""
    px, py = p
    inside = False
    n = len(poly)
    for i in range(n):
        ax, ay = poly[i - 1]
        bx, by = poly[i]
        if (ay > py) != (by > py):
            c = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
            if c == 0:
                return Location.BOUNDARY
            if (c > 0) == (by > ay):
                inside = not inside
        elif ay == py == by and min(ax, bx) <= px <= max(ax, bx):
            return Location.BOUNDARY
        elif (ax, ay) == (px, py):
            return Location.BOUNDARY
    return Location.INTERIOR if inside else Location.OUTSIDE


def canonicalize(poly: Sequence[Point]) -> tuple[Point, ...]:
    """Drop repeated and collinear vertices, orient counterclockwise, and
    rotate to start at the lexicographically smallest vertex."""
    pts: list[Point] = []
    for p in poly:
        if not pts or pts[-1] != p:
            pts.append(p)
    while len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        out = []
        n = len(pts)
        for i in range(n):
            if orient(pts[i - 1], pts[i], pts[(i + 1) % n]) != 0:
                out.append(pts[i])
        if len(out) != n:
            changed = True
            pts = out
    if len(pts) < 3:
        return tuple(pts)
    if twice_signed_area(pts) < 0:
        pts.reverse()
    k = min(range(len(pts)), key=pts.__getitem__)
    return tuple(pts[k:] + pts[:k])


def is_convex(poly: Sequence[Point]) -> bool:
    """Weak convexity: no reflex turns and exactly one full turn in total."""
    n = len(poly)
    if n < 3:
        raise InvalidPolygon("a polygon needs at least 3 vertices")
    for i in range(n):
        if poly[i - 1] == poly[i]:
            raise InvalidPolygon("consecutive vertices coincide")
    a2 = twice_signed_area(poly)
    if a2 == 0:
        return False
    sign = 1 if a2 > 0 else -1
    # Count how many times the edge direction sweeps past the +x axis; a
    # simple convex loop crosses it exactly once.
    crossings = 0
    for i in range(n):
        a, b, c = poly[i - 2], poly[i - 1], poly[i]
        o = orient(a, b, c)
        if o * sign < 0:
            return False
        if o == 0 and (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1]) < 0:
            return False
        d0 = (b[0] - a[0], b[1] - a[1])
        d1 = (c[0] - b[0], c[1] - b[1])
        if sign < 0:
            d0 = (d0[0], -d0[1])
            d1 = (d1[0], -d1[1])
        # Edge direction passes from below the +x axis to at-or-above it.
        if _half(d0) == 1 and _half(d1) == 0:
            crossings += 1
    return crossings == 1


def _half(d) -> int:
    """0 for directions with angle in [0, pi), 1 for [pi, 2*pi)."""
    return 0 if d[1] > 0 or (d[1] == 0 and d[0] > 0) else 1


def convex_hull(points: Iterable[Point]) -> tuple[Point, ...]:
    """Strict counterclockwise hull (monotone chain), starting at the
    lexicographically smallest point."""
    pts = sorted(set(points))
    if len(pts) < 3:
        raise DegenerateHull("fewer than 3 distinct points")
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateHull("all points are collinear")
    return tuple(hull)


def hull_add(poly: Sequence[Point], p: Point) -> tuple[Point, ...]:
    """Hull of a strictly convex counterclockwise polygon and one point."""
    n = len(poly)
    vis = [orient(poly[i], poly[(i + 1) % n], p) < 0 for i in range(n)]
    if not any(vis):
        return tuple(poly)
    # first visible edge after an invisible one; the visible edges are contiguous
    s = next(i for i in range(n) if vis[i] and not vis[i - 1])
    e = s
    while vis[(e + 1) % n]:
        e += 1
    keep = [poly[(e + 1 + k) % n] for k in range(n - (e - s))]
    return canonicalize(keep + [p])


def point_in_convex(p: Point, poly: Sequence[Point], lines=None) -> Location:
    """Classification against a counterclockwise convex polygon; ``lines``
    may carry precomputed :func:`edge_lines`."""
    if lines is None:
        lines = edge_lines(poly)
    on_edge = False
    for line in lines:
        c = _side(line, p)[0]
        if c < 0:
            return Location.OUTSIDE
        if c == 0:
            on_edge = True
    return Location.BOUNDARY if on_edge else Location.INTERIOR


def edge_lines(poly: Sequence[Point]) -> list[tuple[int, int, int]]:
    """Integer edge lines of a counterclockwise polygon, positive inside."""
    return [_line(poly[i - 1], poly[i]) for i in range(len(poly))]


def segment_meets_open_convex(a: Point, b: Point, poly: Sequence[Point], lines=None) -> bool:
    """True iff the closed segment ``ab`` meets the open interior of the
    strictly convex counterclockwise polygon ``poly``. ``lines`` may carry
    precomputed :func:`edge_lines`."""
    if lines is None:
        lines = edge_lines(poly)
    fs = []
    for line in lines:
        fa = _side(line, a)
        fb = _side(line, b)
        if fa[0] <= 0 and fb[0] <= 0:
            return False
        fs.append((fa, fb))
    # the segment is a + t (b - a); each edge bounds t from one side
    lo_n, lo_d = 0, 1
    hi_n, hi_d = 1, 1
    for (na, da), (nb, db) in fs:
        num = na * db
        den = num - nb * da
        if den == 0:
            continue  # parallel to the edge, and on its open inner side
        if den < 0:
            num, den = -num, -den
        # fa > fb means t < num/den is required, else t > num/den
        if na * db > nb * da:
            if num * hi_d < hi_n * den:
                hi_n, hi_d = num, den
        elif num * lo_d > lo_n * den:
            lo_n, lo_d = num, den
        if lo_n * hi_d >= hi_n * lo_d:
            return False
    return True


def clip_halfplane(poly: Sequence[Point], a: Point, b: Point) -> list[Point]:
    """Sutherland-Hodgman clip of a loop to the closed half-plane left of the
    directed line ``ab``. The result may contain collinear or repeated
    vertices."""
    ex, ey = b[0] - a[0], b[1] - a[1]
    out: list[Point] = []
    n = len(poly)
    if n == 0:
        return out
    prev = poly[-1]
    fp = ex * (prev[1] - a[1]) - ey * (prev[0] - a[0])
    for cur in poly:
        fc = ex * (cur[1] - a[1]) - ey * (cur[0] - a[0])
        if fc >= 0:
            if fp < 0:
                out.append(_interp(prev, cur, fp, fc))
            out.append(cur)
        elif fp > 0:
            out.append(_interp(prev, cur, fp, fc))
        prev, fp = cur, fc
    return out


def _interp(p: Point, q: Point, fp, fq) -> Point:
    t = Fraction(fp) / (fp - fq)
    return Point(rat(p[0] + t * (q[0] - p[0])), rat(p[1] + t * (q[1] - p[1])))


def _interp_nd(p: Point, q: Point, fp: tuple[int, int], fq: tuple[int, int]) -> Point:
    (np_, dp), (nq, dq) = fp, fq
    t = Fraction(np_ * dq, np_ * dq - nq * dp)
    return Point(rat(p[0] + t * (q[0] - p[0])), rat(p[1] + t * (q[1] - p[1])))


def _split(poly: Sequence[Point], line) -> tuple[tuple[Point, ...] | None, tuple[Point, ...] | None]:
    """Parts of a strictly convex counterclockwise polygon in the closed
    left and right half-planes of ``line``; ``None`` for a zero-area part.
    Both parts come out strictly convex and counterclockwise."""
    vals = [_side(line, p) for p in poly]
    pos = any(v[0] > 0 for v in vals)
    neg = any(v[0] < 0 for v in vals)
    if not neg:
        return (tuple(poly) if pos else None), None
    if not pos:
        return None, tuple(poly)
    left: list[Point] = []
    right: list[Point] = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i - 1], poly[i]
        fp, fq = vals[i - 1], vals[i]
        if (fp[0] < 0 < fq[0]) or (fq[0] < 0 < fp[0]):
            x = _interp_nd(p, q, fp, fq)
            left.append(x)
            right.append(x)
        if fq[0] >= 0:
            left.append(q)
        if fq[0] <= 0:
            right.append(q)
    return _rotate_min(left), _rotate_min(right)


def _rotate_min(pts: list[Point]) -> tuple[Point, ...]:
    k = min(range(len(pts)), key=pts.__getitem__)
    return tuple(pts[k:] + pts[:k])


def clip_convex(poly: Sequence[Point], a: Point, b: Point) -> tuple[Point, ...] | None:
    """Clip a strictly convex counterclockwise polygon to the closed left
    half-plane of ``ab``; ``None`` when the remainder has zero area."""
    return _split(poly, _line(a, b))[0]


def convex_difference(frag: Sequence[Point], piece: Sequence[Point]) -> list[tuple[Point, ...]]:
    """``closure(frag minus piece)`` as interior-disjoint convex polygons.

    Both inputs are strictly convex and counterclockwise.
    """
    if not bbox_overlap(bbox(frag), bbox(piece)):
        return [tuple(frag)]
    out = []
    rest: Sequence[Point] | None = frag
    n = len(piece)
    for i in range(n):
        inside, outside = _split(rest, _line(piece[i - 1], piece[i]))
        if outside is not None:
            out.append(outside)
        rest = inside
        if rest is None:
            break
    return out


def convex_intersection(p: Sequence[Point], q: Sequence[Point]) -> tuple[Point, ...] | None:
    rest: Sequence[Point] | None = p
    for i in range(len(q)):
        rest = clip_convex(rest, q[i - 1], q[i])
        if rest is None:
            return None
    return tuple(rest)
