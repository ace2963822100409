from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from convexcover.geometry import Point
from convexcover.model import Instance
from convexcover.regions import make_region

ROOT = Path(__file__).resolve().parent.parent
SUITE = ROOT / "benchmarks" / "suite"
SMOKE = ROOT / "benchmarks" / "smoke"

_criteria: dict[int, tuple[bool, str]] = {}


def P(x, y) -> Point:
    return Point.of(x, y)


def poly(*coords):
    return tuple(P(x, y) for x, y in coords)


def square(size=1):
    return poly((0, 0), (size, 0), (size, size), (0, size))


L_OUTER = poly((0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2))


def instance(name, outer, holes=()):
    return Instance(name, make_region(outer, holes))


@pytest.fixture
def unit_square():
    return instance("unit", square(1))


@pytest.fixture
def lshape():
    return instance("lshape", L_OUTER)


@pytest.fixture
def holed_square():
    return instance("holed", square(4), [poly((1, 1), (1, 3), (3, 3), (3, 1))])


@pytest.fixture
def criterion():
    """Record the outcome of a numbered acceptance criterion."""

    def record(number: int, ok: bool, detail: str = "") -> None:
        _criteria[number] = (bool(ok), detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, f"criterion {number} failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        ok, detail = _criteria[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
