from __future__ import annotations

import io
import json
import xml.etree.ElementTree as ET

import pytest

from lozenge.cli import run
from lozenge.core import build_region, parse_ideal
from lozenge.render import ascii_region, svg_region, write_svg
from lozenge.tiling import canonical_tiling

SVG = "{http://www.w3.org/2000/svg}"


def call(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def call_json(*argv: str):
    code, text = call(*argv)
    assert code == 0
    return json.loads(text)


def polygons(svg: str, cls: str) -> list:
    root = ET.fromstring(svg)
    return [p for p in root.iter(f"{SVG}polygon") if p.get("class", "").split()[0] == cls]


# -- rendering -------------------------------------------------------------------------


def test_ascii_rows():
    region = build_region(parse_ideal("x*y,y^2,z^3"), 4)
    rows = ascii_region(region).splitlines()
    assert len(rows) == 4
    assert rows[0].strip() == "^"
    assert sum(r.count("^") for r in rows) == len(region.up)
    assert sum(r.count("v") for r in rows) == len(region.down)
    assert sum(r.count(".") for r in rows) == 8


def test_svg_shades_removed_triangles():
    region = build_region(parse_ideal("x*y,y^2,z^3"), 4)
    svg = svg_region(region)
    assert len(polygons(svg, "puncture")) == 8
    assert len(polygons(svg, "tri")) == len(region.up) + len(region.down)
    assert len(polygons(svg, "frame")) == 1


def test_svg_tiling_overlay():
    region = build_region(parse_ideal("x^3,y^4,z^5"), 6)
    svg = svg_region(region, canonical_tiling(region))
    assert len(polygons(svg, "lozenge")) == len(region.up) == 11
    assert len(polygons(svg, "puncture")) == 14
    pairs = {p.get("data-pair") for p in polygons(svg, "lozenge")}
    assert len(pairs) == 11


def test_svg_is_deterministic(tmp_path):
    region = build_region(parse_ideal("x^3,y^4,z^5"), 6)
    path = tmp_path / "t.svg"
    write_svg(path, region)
    assert path.read_text() == svg_region(region)
    root = ET.fromstring(path.read_text())
    assert float(root.get("width")) == 6 * 20 + 20


# -- command line --------------------------------------------------------------------------


def test_det_verb():
    assert call_json("det", "--ideal", "x^3,y^4,z^5", "--d", "6") == {"det": 10, "per": 10}


def test_det_matrix_export():
    code, text = call("det", "--ideal", "x^2,y^2,z^2", "--d", "3", "--matrix", "csv")
    assert code == 0 and len(text.splitlines()) == 4


def test_wlp_verb():
    data = call_json("wlp", "--ideal", "x^2,y^2,z^2")
    assert data["wlpQ"] is True and data["failChars"] == [2]


def test_splitting_verb():
    data = call_json("splitting-type", "--aci", "6,7,8,3,3,3")
    assert data["closed"] == data["oracle"] == [-10, -10, -10]


def test_mirror_verb():
    data = call_json("mirror", "b=1; axials=(3,2),(0,1)", "--check")
    assert data["per"] == 8


def test_region_dump_round_trip(tmp_path):
    dumped = call_json("region", "--ideal", "x*y,y^2,z^3", "--d", "4", "--dump")
    path = tmp_path / "region.json"
    path.write_text(json.dumps(dumped))
    again = call_json("region", "--region", str(path), "--dump")
    assert again == dumped
    direct = call_json("region", "--ideal", "x*y,y^2,z^3", "--d", "4")
    loaded = call_json("region", "--region", str(path))
    assert direct == loaded


def test_output_is_deterministic():
    argv = ("primes", "--ideal", "x^5,y^5,z^5,x^3*y^2,x^2*z^3,y^3*z^2", "--d", "6")
    first = call(*argv)
    assert first == call(*argv)
    assert json.loads(first[1])["factorization"] == {"5": 1, "7": 1}


def test_precondition_exit_code():
    assert call("det", "--ideal", "x^2,,y", "--d", "3")[0] == 2
    assert call("splitting-type", "--aci", "3,3,3,0,1,1")[0] == 2


def test_cap_exit_code():
    assert call("tilings", "--ideal", "x^3,y^4,z^5", "--d", "6", "--cap", "3")[0] == 3


def test_render_verb(tmp_path):
    code, text = call("render", "--ideal", "x*y,y^2,z^3", "--d", "4")
    assert code == 0 and len(text.splitlines()) == 4
    data = call_json("render", "--ideal", "x^3,y^4,z^5", "--d", "6", "--tiling", "--svg", str(tmp_path / "o.svg"))
    assert data["shaded"] == 14 and data["lozenges"] == 11


def test_experiments_are_labelled():
    data = call_json("experiment", "zero-mirror", "--max-d", "6")
    assert data["label"] == "conjecture - not asserted"
    data = call_json("experiment", "type-two-char", "--samples", "3", "--max-d", "5")
    assert data["label"] == "conjecture - not asserted"


@pytest.mark.parametrize("argv", [
    ("semistable", "--ideal", "x^2,y^2,z^2,x*y,x*z"),
    ("togliatti", "--ideal", "x^3,y^3,z^3,x*y*z"),
    ("family", "--degrees", "5,5,4,4"),
    ("reduce-unit", "--ideal", "x^7,y^7,z^6,x*y^4*z^2,x^3*y*z^2,x^4*y*z", "--d", "8"),
    ("per", "--ideal", "x^3,y^4,z^5", "--d", "6"),
    ("tilings", "--ideal", "x^2,y^2,z^2", "--d", "3", "--list"),
])
def test_other_verbs_emit_json(argv):
    assert isinstance(call_json(*argv), dict)
