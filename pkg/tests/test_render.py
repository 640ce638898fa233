import json
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from nclam.lamination import Lamination, nc_to_lamination, triangulate
from nclam.noncrossing import NoncrossingTree, extract, sample_simply_generated
from nclam.offspring import WeightSeq
from nclam.render import LayerStyle, RenderStyle, layered, render
from nclam.seeding import derive_rng
from nclam.trees import encode

GOLDEN = Path(__file__).parent / "golden" / "triangulated_nc30.svg"
NS = "{http://www.w3.org/2000/svg}"


def golden_pipeline() -> str:
    nc = sample_simply_generated(WeightSeq("uniform"), 30, derive_rng(3, "golden"))
    tree, dec = extract(nc)
    union, classes = layered(nc_to_lamination(nc), triangulate(encode(tree), dec))
    return render(union, layers=classes)


def _lines(svg):
    return ET.fromstring(svg.encode()).findall(f"{NS}line")


def test_empty_lamination_only_circle():
    root = ET.fromstring(render(Lamination(10)).encode())
    assert len(root.findall(f"{NS}circle")) == 1
    assert len(root.findall(f"{NS}line")) == 0


def test_triangle_has_three_lines():
    assert len(_lines(render(Lamination(3, [(0, 1), (1, 2), (0, 2)])))) == 3


def test_deterministic_bytes():
    lam = Lamination(7, [(0, 3), (3, 5), (0, 5)])
    assert render(lam) == render(lam)


def test_coordinates_inside_canvas_and_on_circle():
    nc = sample_simply_generated(WeightSeq("uniform"), 200, derive_rng(1, "render"))
    style = RenderStyle(size=400, margin=20)
    lines = _lines(render(nc, style))
    assert len(lines) == 199
    c, r = 200.0, 180.0
    for ln in lines:
        for a, b in (("x1", "y1"), ("x2", "y2")):
            x, y = float(ln.get(a)), float(ln.get(b))
            assert 0 <= x <= 400 and 0 <= y <= 400
            assert abs((x - c) ** 2 + (y - c) ** 2 - r * r) < 1e-3


def test_clockwise_convention():
    # point 1 of 4 sits at angle -pi/2, i.e. at the bottom of the screen
    (ln,) = _lines(render(Lamination(4, [(0, 1)]), RenderStyle(size=100, margin=0)))
    assert float(ln.get("x2")) == pytest.approx(50.0, abs=1e-6)
    assert float(ln.get("y2")) == pytest.approx(100.0, abs=1e-6)


def test_layers_and_style():
    base = Lamination(6, [(0, 3)])
    extra = Lamination(6, [(0, 3), (0, 2), (3, 5)])
    union, classes = layered(base, extra)
    assert classes == {(0, 2): "triangulation", (3, 5): "triangulation"}
    style = RenderStyle.from_json({"size": 300, "layers": {"triangulation": {"stroke": "#00ff00", "width": 2}}})
    lines = _lines(render(union, style, classes))
    dashed = [ln for ln in lines if ln.get("class") == "triangulation"]
    assert len(dashed) == 2 and all(ln.get("stroke") == "#00ff00" for ln in dashed)
    with pytest.raises(ValueError):
        RenderStyle(layers={"base": LayerStyle(width=0)})


def test_noncrossing_tree_input():
    assert len(_lines(render(NoncrossingTree(3, [(0, 1), (0, 2)])))) == 2


def test_golden_file():
    assert golden_pipeline() == GOLDEN.read_text()


def test_style_file(tmp_path):
    p = tmp_path / "style.json"
    p.write_text(json.dumps({"size": 120, "circle": False}))
    svg = render(Lamination(3, [(0, 1)]), RenderStyle.load(p))
    assert "<circle" not in svg and 'width="120"' in svg
