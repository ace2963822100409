"""Exact coverage residuals and the solution verifier."""

from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .geometry import (
    InvalidPolygon,
    Location,
    Point,
    bbox,
    canonicalize,
    centroid,
    convex_difference,
    is_convex,
    orient,
    twice_signed_area,
)
from .model import Instance, Solution
from .regions import PolygonWithHoles, assemble_regions, first_uncontained_point, piece_contained, point_in_region
from .triangulate import triangulate


class WrongInstance(ValueError):
    pass


class Residual:
    """The still-uncovered part of a region, kept as interior-disjoint
    convex fragments in a coarse grid so each subtraction only touches
    nearby fragments."""

    def __init__(self, fragments: Iterable[Sequence[Point]], extent=None):
        frags = [canonicalize(f) for f in fragments]
        frags = [f for f in frags if len(f) >= 3]
        self._frags: dict[int, tuple[Point, ...]] = {}
        self._boxes: dict[int, tuple] = {}
        self._grid: dict[tuple[int, int], set[int]] = defaultdict(set)
        self._next = 0
        if extent is None and frags:
            extent = bbox([p for f in frags for p in f])
        if extent is None:
            extent = (0, 0, 1, 1)
        self._x0 = float(extent[0])
        self._y0 = float(extent[1])
        span = max(float(extent[2]) - self._x0, float(extent[3]) - self._y0, 1e-9)
        self._cell = span / max(1, int(math.sqrt(len(frags) + 1)))
        for f in frags:
            self._insert(f)

    @classmethod
    def of_region(cls, region: PolygonWithHoles) -> "Residual":
        mesh = triangulate(region)
        return cls(mesh.polygons(), extent=region.box)

    def _cells(self, box):
        c = self._cell
        return (math.floor((float(box[0]) - self._x0) / c), math.floor((float(box[1]) - self._y0) / c),
                math.floor((float(box[2]) - self._x0) / c), math.floor((float(box[3]) - self._y0) / c))

    def _insert(self, frag: tuple[Point, ...]) -> None:
        k = self._next
        self._next += 1
        box = bbox(frag)
        self._frags[k] = frag
        self._boxes[k] = box
        i0, j0, i1, j1 = self._cells(box)
        for i in range(i0, i1 + 1):
            for j in range(j0, j1 + 1):
                self._grid[i, j].add(k)

    def _drop(self, k: int) -> None:
        i0, j0, i1, j1 = self._cells(self._boxes[k])
        for i in range(i0, i1 + 1):
            for j in range(j0, j1 + 1):
                self._grid[i, j].discard(k)
        del self._frags[k]
        del self._boxes[k]

    def _near(self, box) -> list[int]:
        i0, j0, i1, j1 = self._cells(box)
        found = set()
        grid = self._grid
        for i in range(i0, i1 + 1):
            for j in range(j0, j1 + 1):
                cell = grid.get((i, j))
                if cell:
                    found |= cell
        out = []
        for k in sorted(found):
            b = self._boxes[k]
            if b[0] < box[2] and box[0] < b[2] and b[1] < box[3] and box[1] < b[3]:
                out.append(k)
        return out

    def subtract(self, piece: Sequence[Point]) -> None:
        piece = canonicalize(piece)
        if len(piece) < 3:
            return
        for k in self._near(bbox(piece)):
            frag = self._frags[k]
            rest = convex_difference(frag, piece)
            if len(rest) == 1 and rest[0] == frag:
                continue
            self._drop(k)
            for r in rest:
                self._insert(r)

    def is_empty(self) -> bool:
        return not self._frags

    @property
    def fragments(self) -> list[tuple[Point, ...]]:
        return [self._frags[k] for k in sorted(self._frags)]

    def area(self):
        from fractions import Fraction
        from .geometry import rat
        return rat(Fraction(sum(twice_signed_area(f) for f in self._frags.values()), 2))

    def components(self) -> list[PolygonWithHoles]:
        edges = []
        for f in self._frags.values():
            n = len(f)
            edges.extend((f[i - 1], f[i]) for i in range(n))
        return assemble_regions(edges)

    def witnesses(self) -> list[Point]:
        """One interior point per connected component of the residual."""
        frags = self.fragments
        points = [centroid(f) for f in frags]
        out = []
        for comp in self.components():
            box = comp.box
            for p in points:
                if box[0] < p[0] < box[2] and box[1] < p[1] < box[3] and \
                        point_in_region(p, comp) is Location.INTERIOR:
                    out.append(p)
                    break
        return out


# --- verification -----------------------------------------------------------

class Verdict(enum.Enum):
    VALID = "valid"
    INVALID = "invalid"


@dataclass(frozen=True)
class NonConvex:
    piece: int
    witness: Point


@dataclass(frozen=True)
class NotContained:
    piece: int
    witness: Point


@dataclass(frozen=True)
class Uncovered:
    witness: Point


@dataclass
class CoverReport:
    verdict: Verdict
    piece_count: int
    failures: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.verdict is Verdict.VALID

    def summary(self) -> str:
        if self.valid:
            return f"VALID k={self.piece_count}"
        f = self.failures[0]
        w = f.witness
        where = f"({w[0]}, {w[1]})"
        if isinstance(f, Uncovered):
            return f"INVALID uncovered at {where}"
        if isinstance(f, NotContained):
            return f"INVALID piece {f.piece} leaves the region at {where}"
        return f"INVALID piece {f.piece} is not convex at {where}"


def _reflex_witness(piece: Sequence[Point]) -> Point:
    sign = 1 if twice_signed_area(piece) >= 0 else -1
    n = len(piece)
    for i in range(n):
        if orient(piece[i - 1], piece[i], piece[(i + 1) % n]) * sign < 0:
            return piece[i]
    return piece[0]


def verify_solution(inst: Instance, sol: Solution, residual: Residual | None = None) -> CoverReport:
    """Exact feasibility check: convexity, containment and full coverage.

    ``residual`` may be passed to reuse a precomputed triangulation of the
    region; it is consumed.
    """
    if sol.instance_name != inst.name:
        raise WrongInstance(f"solution is for {sol.instance_name!r}, not {inst.name!r}")
    failures: list = []
    convex = []
    for i, piece in enumerate(sol.pieces):
        try:
            ok = is_convex(piece)
        except InvalidPolygon:
            ok = False
        if not ok:
            failures.append(NonConvex(i, _reflex_witness(piece)))
            continue
        convex.append(piece)
        if not piece_contained(piece, inst.region):
            w = first_uncontained_point(piece, inst.region)
            failures.append(NotContained(i, w if w is not None else piece[0]))
    if residual is None:
        residual = Residual.of_region(inst.region)
    for piece in convex:
        residual.subtract(piece)
        if residual.is_empty():
            break
    if not residual.is_empty():
        failures.extend(Uncovered(w) for w in residual.witnesses())
    verdict = Verdict.INVALID if failures else Verdict.VALID
    return CoverReport(verdict, len(sol.pieces), failures)


def covers(region: PolygonWithHoles, pieces: Iterable[Sequence[Point]]) -> bool:
    res = Residual.of_region(region)
    for p in pieces:
        res.subtract(p)
        if res.is_empty():
            return True
    return res.is_empty()
