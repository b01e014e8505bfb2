import re
import xml.etree.ElementTree as ET
from collections import Counter

import pytest

from conftest import solved_patch
from dendrotile.hexgrid import Region
from dendrotile.render import STYLES, RenderStyle, render_svg, render_tile
from dendrotile.ruleset import TileState
from dendrotile.solver import Patch

SVG_NS = "{http://www.w3.org/2000/svg}"


def paths(svg: str) -> list:
    return ET.fromstring(svg).iter(f"{SVG_NS}path")


def styles_for(rs):
    if rs.name == "st12":
        return ("outline", "stripes", "joints", "rhombi")
    if rs.name == "hextoo6":
        return ("outline", "dendrite", "joints", "rhombi")
    return ("outline", "joints", "rhombi")


@pytest.mark.parametrize("name", ["unmarked", "st12", "hextoo6"])
def test_every_style_parses(name, request):
    rs = request.getfixturevalue(name)
    p = solved_patch(rs, 2)
    for style in styles_for(rs):
        svg = render_svg(p, rs, RenderStyle(style=style))
        root = ET.fromstring(svg)
        assert root.tag == f"{SVG_NS}svg"
        assert svg.endswith("\n")


@pytest.mark.parametrize("name", ["st12", "hextoo6"])
def test_hexagons_are_the_only_paths(name, request):
    """Whatever the style adds, the <path> count stays the cell count."""
    rs = request.getfixturevalue(name)
    p = solved_patch(rs, 2)
    for style in styles_for(rs):
        svg = render_svg(p, rs, RenderStyle(style=style))
        assert len(list(paths(svg))) == 19, style


def test_empty_patch_renders_no_paths(st12):
    svg = render_svg(Patch(st12, Region.hex(1), {}), st12, RenderStyle())
    assert len(list(paths(svg))) == 0
    ET.fromstring(svg)


def test_byte_determinism(st12):
    p = solved_patch(st12, 3)
    style = RenderStyle(style="stripes", size=24.0)
    assert render_svg(p, st12, style) == render_svg(p, st12, style)


def test_unknown_style_rejected(st12):
    with pytest.raises(ValueError, match="unknown style"):
        render_svg(solved_patch(st12, 0), st12, RenderStyle(style="plaid"))


def test_missing_stroke_layer_rejected(unmarked, st12):
    with pytest.raises(ValueError, match="declares no"):
        render_svg(solved_patch(unmarked, 1), unmarked,
                   RenderStyle(style="stripes"))
    with pytest.raises(ValueError, match="declares no"):
        render_svg(solved_patch(st12, 1), st12, RenderStyle(style="dendrite"))


def test_render_tile_single_hexagon(st12):
    svg = render_tile(TileState("hex", 0, "R"), st12,
                      RenderStyle(style="stripes"))
    assert len(list(paths(svg))) == 1


def test_render_tile_rejects_unknown_state(st12, unmarked):
    with pytest.raises(ValueError):
        render_tile(TileState("hex", 0, "F"), unmarked, RenderStyle())
    with pytest.raises(ValueError):
        render_tile(TileState("square", 0, "R"), st12, RenderStyle())


def test_rotating_a_tile_permutes_its_stripe_ends(st12):
    """Orientation only re-anchors the strokes; the endpoint multiset over
    all six edge midpoints is orientation-invariant."""
    def endpoints(svg):
        pts = set()
        for m in re.finditer(r'points="([^"]+)"', svg):
            for xy in m.group(1).split():
                pts.add(xy)
        return pts

    base = endpoints(render_tile(TileState("hex", 0, "R"), st12,
                                 RenderStyle(style="stripes")))
    for o in range(1, 6):
        rot = endpoints(render_tile(TileState("hex", o, "R"), st12,
                                    RenderStyle(style="stripes")))
        assert rot == base


def test_joints_draw_one_male_band_per_tile(hextoo6):
    p = solved_patch(hextoo6, 2)
    svg = render_svg(p, hextoo6, RenderStyle(style="joints"))
    root = ET.fromstring(svg)
    colors = RenderStyle(style="joints").colors()
    male = [el for el in root.iter(f"{SVG_NS}polygon")
            if el.get("fill") == colors["male"]]
    female = [el for el in root.iter(f"{SVG_NS}polygon")
              if el.get("fill") == colors["female"]]
    assert len(male) == 19
    assert len(female) == 19 * 5


def test_rhombi_use_three_colors(st12):
    svg = render_svg(solved_patch(st12, 1), st12, RenderStyle(style="rhombi"))
    root = ET.fromstring(svg)
    colors = RenderStyle(style="rhombi").colors()
    fills = {el.get("fill") for el in root.iter(f"{SVG_NS}polygon")}
    assert fills == {colors["rhombi0"], colors["rhombi1"], colors["rhombi2"]}


def test_neighbors_share_midpoint_coordinates(st12):
    """The stripe ends on a shared edge must coincide exactly in the text,
    or printed patches show seams."""
    region = Region.explicit([(0, 0), (1, 0)])
    from dendrotile.solver import SolverConfig, solve_region
    res = solve_region(region, st12, SolverConfig(seed=0))
    svg = render_svg(Patch(st12, region, res.assignment), st12,
                     RenderStyle(style="stripes"))
    pts = []
    for m in re.finditer(r'points="([^"]+)"', svg):
        pts.extend(m.group(1).split())
    shared = [p for p, n in Counter(pts).items() if n >= 2]
    assert shared, "no coincident stripe endpoints on the shared edge"


def test_palette_override_changes_output(st12):
    p = solved_patch(st12, 1)
    plain = render_svg(p, st12, RenderStyle(style="stripes"))
    tinted = render_svg(p, st12, RenderStyle(
        style="stripes", palette={"stripe": "#123456"}))
    assert plain != tinted
    assert "#123456" in tinted


def test_negative_zero_never_printed(st12):
    for style in ("outline", "stripes", "joints", "rhombi"):
        svg = render_svg(solved_patch(st12, 2), st12, RenderStyle(style=style))
        assert "-0.000" not in svg


def test_style_catalogue_is_fixed():
    assert STYLES == ("outline", "stripes", "dendrite", "joints", "rhombi")
