"""Instances, solutions and their JSON documents."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .geometry import Point, canonicalize, rat, twice_signed_area
from .regions import InvalidRegion, PolygonWithHoles, make_region, validate_region

log = logging.getLogger(__name__)


class ParseError(ValueError):
    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


class InvalidInstance(ValueError):
    pass


class InvalidSolution(ValueError):
    pass


class NormalizationFailed(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    name: str
    region: PolygonWithHoles
    meta: dict | None = field(default=None, compare=False)

    @property
    def vertex_count(self) -> int:
        return sum(len(loop) for loop in self.region.loops)


@dataclass(frozen=True)
class Solution:
    instance_name: str
    pieces: tuple[tuple[Point, ...], ...]

    @property
    def k(self) -> int:
        return len(self.pieces)


# --- helpers ---------------------------------------------------------------

def _load(data: bytes | str) -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from None
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None


def _dump(obj: Any) -> bytes:
    return (json.dumps(obj, separators=(",", ":"), ensure_ascii=False) + "\n").encode("utf-8")


def _expect(cond: bool, message: str, location: str) -> None:
    if not cond:
        raise ParseError(message, location)


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _number(v, location: str, integral: bool):
    if _is_int(v):
        return v
    if integral:
        raise ParseError("expected an integer coordinate", location)
    _expect(isinstance(v, dict) and set(v) == {"num", "den"}, "expected an integer or {num, den}", location)
    num, den = v["num"], v["den"]
    _expect(_is_int(num) and _is_int(den), "num and den must be integers", location)
    _expect(den != 0, "zero denominator", location)
    _expect(den > 0, "denominator must be positive", location)
    return rat(Fraction(num, den))


def _encode_number(v):
    if isinstance(v, int):
        return v
    return {"num": v.numerator, "den": v.denominator}


def _points(raw, location: str, integral: bool) -> list[Point]:
    _expect(isinstance(raw, list), "expected a list of points", location)
    out = []
    for i, item in enumerate(raw):
        loc = f"{location}[{i}]"
        _expect(isinstance(item, dict) and "x" in item and "y" in item, "expected {x, y}", loc)
        out.append(Point(_number(item["x"], loc + ".x", integral), _number(item["y"], loc + ".y", integral)))
    return out


def _encode_points(points: Sequence[Point]) -> list:
    return [{"x": _encode_number(p[0]), "y": _encode_number(p[1])} for p in points]


# --- instances -------------------------------------------------------------

def parse_instance(data: bytes | str) -> Instance:
    doc = _load(data)
    _expect(isinstance(doc, dict), "expected an object", "$")
    _expect(doc.get("type") == "cover_instance", "type must be 'cover_instance'", "$.type")
    name = doc.get("name")
    _expect(isinstance(name, str) and name != "", "missing instance name", "$.name")
    outer = _points(doc.get("outer_boundary"), "$.outer_boundary", integral=True)
    raw_holes = doc.get("holes", [])
    _expect(isinstance(raw_holes, list), "expected a list of holes", "$.holes")
    holes = [_points(h, f"$.holes[{i}]", integral=True) for i, h in enumerate(raw_holes)]
    if len(outer) >= 3 and twice_signed_area(outer) < 0:
        log.warning("instance %s: outer boundary was clockwise; reversed", name)
    for i, h in enumerate(holes):
        if len(h) >= 3 and twice_signed_area(h) > 0:
            log.warning("instance %s: hole %d was counterclockwise; reversed", name, i)
    region = make_region(outer, holes)
    try:
        validate_region(region)
    except InvalidRegion as exc:
        raise InvalidInstance(f"{name}: {exc}") from None
    meta = doc.get("meta")
    _expect(meta is None or isinstance(meta, dict), "meta must be an object", "$.meta")
    return Instance(name, region, meta)


def serialize_instance(inst: Instance) -> bytes:
    region = make_region(inst.region.outer, inst.region.holes)
    doc = {
        "type": "cover_instance",
        "name": inst.name,
        "outer_boundary": _encode_points(region.outer),
        "holes": [_encode_points(h) for h in region.holes],
    }
    if inst.meta is not None:
        doc["meta"] = inst.meta
    return _dump(doc)


# --- solutions -------------------------------------------------------------

def make_solution(instance_name: str, pieces) -> Solution:
    out = []
    for i, piece in enumerate(pieces):
        piece = list(piece)
        if len(piece) < 3:
            raise InvalidSolution(f"piece {i} has fewer than 3 vertices")
        a2 = twice_signed_area(piece)
        if a2 == 0:
            raise InvalidSolution(f"piece {i} has zero area")
        if a2 < 0:
            piece.reverse()
        out.append(tuple(piece))
    return Solution(instance_name, tuple(out))


def parse_solution(data: bytes | str) -> Solution:
    doc = _load(data)
    _expect(isinstance(doc, dict), "expected an object", "$")
    _expect(doc.get("type") == "cover_solution", "type must be 'cover_solution'", "$.type")
    name = doc.get("instance")
    _expect(isinstance(name, str), "missing instance name", "$.instance")
    raw = doc.get("pieces")
    _expect(isinstance(raw, list), "expected a list of pieces", "$.pieces")
    pieces = [_points(p, f"$.pieces[{i}]", integral=False) for i, p in enumerate(raw)]
    for i, p in enumerate(pieces):
        if len(p) >= 3 and twice_signed_area(p) < 0:
            log.warning("solution for %s: piece %d was clockwise; reversed", name, i)
    return make_solution(name, pieces)


def serialize_solution(sol: Solution) -> bytes:
    checked = make_solution(sol.instance_name, sol.pieces)
    doc = {
        "type": "cover_solution",
        "instance": checked.instance_name,
        "pieces": [_encode_points(p) for p in checked.pieces],
    }
    return _dump(doc)


def solution_from_pieces(instance_name: str, pieces) -> Solution:
    """Canonical solution: canonicalized pieces in sorted order."""
    return make_solution(instance_name, sorted(canonicalize(p) for p in pieces))


# --- coordinate normalization ---------------------------------------------

def _round_half_up(v) -> int:
    return math.floor(Fraction(v) + Fraction(1, 2))


def normalize_coordinates(region: PolygonWithHoles, scale: int) -> PolygonWithHoles:
    """Scale, round to the nearest integer, and translate so that the
    minimum x and y are 0. Raises :class:`NormalizationFailed` when rounding
    breaks the polygon."""
    if not _is_int(scale) or scale < 1:
        raise ValueError("scale must be a positive integer")
    loops = [[(_round_half_up(p[0] * scale), _round_half_up(p[1] * scale)) for p in loop]
             for loop in region.loops]
    mx = min(x for loop in loops for x, _ in loop)
    my = min(y for loop in loops for _, y in loop)
    moved = [[Point(x - mx, y - my) for x, y in loop] for loop in loops]
    for loop in moved:
        n = len(loop)
        if any(loop[i - 1] == loop[i] for i in range(n)):
            raise NormalizationFailed("rounding collapsed an edge")
    try:
        out = make_region(moved[0], moved[1:])
        validate_region(out)
    except InvalidRegion as exc:
        raise NormalizationFailed(str(exc)) from None
    return out
