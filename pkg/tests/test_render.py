import xml.etree.ElementTree as ET

from conftest import instance, square
from convexcover.model import make_solution
from convexcover.render import render_svg

NS = "{http://www.w3.org/2000/svg}"


def parse(data: bytes):
    return ET.fromstring(data.decode("utf-8"))


def test_square_without_solution():
    root = parse(render_svg(instance("sq", square(10))))
    assert len(root.findall(f"{NS}path")) == 1
    assert root.findall(f"{NS}polygon") == []


def test_square_with_one_piece():
    inst = instance("sq", square(10))
    root = parse(render_svg(inst, make_solution("sq", [square(10)])))
    assert len(root.findall(f"{NS}path")) == 1
    pieces = root.findall(f"{NS}polygon")
    assert len(pieces) == 1 and pieces[0].get("fill-opacity") == "0.35"


def test_holes_are_gray_and_output_stable(holed_square):
    data = render_svg(holed_square)
    root = parse(data)
    holes = root.findall(f"{NS}polygon")
    assert len(holes) == 1 and holes[0].get("fill") == "#999999"
    assert render_svg(holed_square) == data


def test_piece_colours_differ():
    inst = instance("sq", square(4))
    pieces = [square(4)] * 5
    root = parse(render_svg(inst, make_solution("sq", pieces)))
    fills = [p.get("fill") for p in root.findall(f"{NS}polygon")]
    assert len(set(fills)) == 5
