from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import L_OUTER, P, poly, square
from oracles import hull_bruteforce, shoelace_int
from convexcover.geometry import (
    DegenerateHull,
    InvalidPolygon,
    Location,
    Orientation,
    area,
    canonicalize,
    clip_convex,
    convex_difference,
    convex_hull,
    convex_intersection,
    hull_add,
    is_convex,
    line_intersection,
    orientation,
    point_in_convex,
    rat,
    segment_meets_open_convex,
    signed_area,
)
from convexcover.regions import (
    make_region,
    piece_contained,
    point_in_region,
    region_difference,
    regions_area,
)

coord = st.integers(-50, 50)
point = st.builds(P, coord, coord)
rational = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def test_rat_normalizes():
    assert rat(Fraction(4, 2)) == 2 and type(rat(Fraction(4, 2))) is int
    assert rat(Fraction(2, 4)) == Fraction(1, 2)
    with pytest.raises(TypeError):
        rat(0.5)


def test_orientation_examples():
    assert orientation(P(0, 0), P(1, 0), P(0, 1)) is Orientation.CCW
    assert orientation(P(0, 0), P(1, 1), P(2, 2)) is Orientation.COLLINEAR
    assert orientation(P(0, 0), P(0, 1), P(1, 0)) is Orientation.CW


@given(st.builds(P, rational, rational), st.builds(P, rational, rational), st.builds(P, rational, rational),
       st.integers(1, 1000))
def test_orientation_antisymmetric_and_scale_invariant(p, q, r, k):
    assert orientation(p, q, r) == -orientation(p, r, q)
    scaled = [P(a.x * k, a.y * k) for a in (p, q, r)]
    assert orientation(*scaled) == orientation(p, q, r)


def test_is_convex_examples():
    assert is_convex(square())
    assert not is_convex(L_OUTER)
    assert is_convex(poly((0, 0), (1, 0), (2, 0), (1, 1)))
    with pytest.raises(InvalidPolygon):
        is_convex(poly((0, 0), (1, 0)))


def test_is_convex_rejects_double_turn():
    star = poly((0, 0), (2, 1), (4, 0), (3, 2), (4, 4), (2, 3), (0, 4), (1, 2))
    assert not is_convex(star)
    # a pentagram is locally left-turning everywhere but winds twice
    pentagram = poly((0, 10), (6, -8), (-10, 3), (10, 3), (-6, -8))
    assert not is_convex(pentagram)


def test_point_in_region_examples():
    sq = make_region(square())
    assert point_in_region(P(Fraction(1, 2), Fraction(1, 2)), sq) is Location.INTERIOR
    assert point_in_region(P(0, Fraction(1, 2)), sq) is Location.BOUNDARY
    q = Fraction(1, 4)
    holed = make_region(square(), [poly((q, q), (q, 3 * q), (3 * q, 3 * q), (3 * q, q))])
    assert point_in_region(P(Fraction(1, 2), Fraction(1, 2)), holed) is Location.OUTSIDE
    assert point_in_region(P(q, Fraction(1, 2)), holed) is Location.BOUNDARY
    assert point_in_region(P(2, 2), holed) is Location.OUTSIDE


def test_signed_area_examples():
    assert signed_area(square()) == 1
    assert signed_area(tuple(reversed(square()))) == -1


@given(st.lists(st.builds(P, rational, rational), min_size=10, max_size=10))
def test_signed_area_matches_integer_shoelace(pts):
    assert signed_area(pts) == shoelace_int(pts)


def test_convex_hull_examples():
    pts = list(square()) + [P(Fraction(1, 2), Fraction(1, 2))]
    assert set(convex_hull(pts)) == set(square())
    tri = poly((0, 0), (3, 1), (1, 2))
    assert set(convex_hull(tri)) == set(tri)
    with pytest.raises(DegenerateHull):
        convex_hull([P(0, 0), P(1, 1), P(2, 2)])
    with pytest.raises(DegenerateHull):
        convex_hull([P(0, 0), P(1, 1)])


@settings(max_examples=40, deadline=None)
@given(st.lists(point, min_size=50, max_size=50, unique=True))
def test_convex_hull_matches_bruteforce(pts):
    try:
        hull = convex_hull(pts)
    except DegenerateHull:
        assert len(hull_bruteforce(pts)) <= 2
        return
    assert set(hull) == hull_bruteforce(pts)
    assert is_convex(hull) and signed_area(hull) > 0
    region = make_region(hull)
    assert all(point_in_region(p, region) is not Location.OUTSIDE for p in pts)


@given(st.lists(point, min_size=4, max_size=12, unique=True))
def test_hull_add_is_incremental_hull(pts):
    try:
        hull = convex_hull(pts[:3])
        full = convex_hull(pts)
    except DegenerateHull:
        return
    for p in pts[3:]:
        hull = hull_add(hull, p)
    assert set(hull) == set(full)


def test_canonicalize_drops_collinear_and_rotates():
    assert canonicalize(poly((1, 0), (2, 0), (2, 2), (0, 2), (0, 0))) == poly((0, 0), (2, 0), (2, 2), (0, 2))


def test_line_intersection():
    assert line_intersection(P(0, 0), P(2, 2), P(0, 2), P(2, 0)) == P(1, 1)
    assert line_intersection(P(0, 0), P(3, 0), P(1, -1), P(1, 5)) == P(1, 0)


def test_point_in_convex():
    sq = square(2)
    assert point_in_convex(P(1, 1), sq) is Location.INTERIOR
    assert point_in_convex(P(2, 1), sq) is Location.BOUNDARY
    assert point_in_convex(P(3, 1), sq) is Location.OUTSIDE


def test_segment_meets_open_convex():
    sq = square(2)
    assert segment_meets_open_convex(P(-1, 1), P(3, 1), sq)
    assert not segment_meets_open_convex(P(0, -1), P(0, 3), sq)  # runs along an edge
    assert not segment_meets_open_convex(P(2, 2), P(3, 5), sq)  # touches a corner
    assert segment_meets_open_convex(P(1, 1), P(5, 5), sq)
    assert not segment_meets_open_convex(P(3, 0), P(4, 4), sq)


def _hull_or_none(pts):
    try:
        return convex_hull(pts)
    except DegenerateHull:
        return None


hulls = st.lists(point, min_size=3, max_size=8, unique=True).map(_hull_or_none).filter(lambda h: h is not None)


@settings(max_examples=150, deadline=None)
@given(hulls, hulls)
def test_convex_difference_area_identity(a, b):
    parts = convex_difference(a, b)
    inter = convex_intersection(a, b)
    inter_area = area(inter) if inter else 0
    assert sum(area(p) for p in parts) + inter_area == area(a)
    for p in parts:
        assert is_convex(p)
        # no part overlaps the subtracted piece in area
        overlap = convex_intersection(p, b)
        assert overlap is None or area(overlap) == 0


@given(hulls, point, point)
def test_clip_convex_keeps_left_side(a, p, q):
    if p == q:
        return
    kept = clip_convex(a, p, q)
    if kept is None:
        return
    assert is_convex(kept)
    assert all(orientation(p, q, v) >= 0 for v in kept)


def test_piece_contained_examples():
    sq = make_region(square(4))
    assert piece_contained(square(4), sq)
    holed = make_region(square(4), [poly((1, 1), (1, 2), (2, 2), (2, 1))])
    assert not piece_contained(poly((0, 0), (4, 0), (4, 4)), holed)
    assert piece_contained(poly((0, 0), (4, 0), (4, 1), (0, 1)), holed)
    lreg = make_region(L_OUTER)
    assert piece_contained(poly((0, 0), (2, 0), (2, 1), (0, 1)), lreg)
    assert not piece_contained(poly((0, 0), (2, 0), (2, 2)), lreg)


def test_piece_contained_sliver_through_reflex_corner():
    # a thin triangle poking out of the L between its arms
    lreg = make_region(L_OUTER)
    piece = (P(0, 0), P(Fraction(21, 10), 1), P(1, Fraction(11, 10)))
    assert not piece_contained(piece, lreg)


def test_region_difference_examples():
    sq = make_region(square())
    assert region_difference(sq, square()) == []
    half = Fraction(1, 2)
    left = poly((0, 0), (half, 0), (half, 1), (0, 1))
    out = region_difference(sq, left)
    assert len(out) == 1 and regions_area(out) == half
    assert set(out[0].outer) == {P(half, 0), P(1, 0), P(1, 1), P(half, 1)}


def test_region_difference_splits_and_creates_holes():
    sq = make_region(square(6))
    band = poly((2, -1), (4, -1), (4, 7), (2, 7))
    out = region_difference(sq, band)
    assert len(out) == 2 and regions_area(out) == 24
    inner = poly((2, 2), (4, 2), (4, 4), (2, 4))
    out = region_difference(sq, inner)
    assert len(out) == 1 and len(out[0].holes) == 1 and regions_area(out) == 32


@settings(max_examples=80, deadline=None)
@given(hulls)
def test_region_difference_area_identity(piece):
    holed = make_region(poly((-30, -30), (30, -30), (30, 30), (-30, 30)),
                        [poly((-10, -10), (-10, 5), (5, 5), (5, -10))])
    rest = region_difference(holed, piece)
    inter = holed.area() - regions_area(rest)
    # differencing twice recovers the intersection area
    assert 0 <= inter <= area(piece)
    again = []
    for comp in rest:
        again.extend(region_difference(comp, piece))
    assert regions_area(again) == regions_area(rest)
