import json

import pytest

from conftest import solved_patch
from dendrotile.aperiodicity import (
    SCAN_NOTE,
    loop_census,
    scan_translations,
    torus_scan,
)
from dendrotile.hexgrid import Region, canonical_bases, distance
from dendrotile.ruleset import TileState, load_ruleset
from dendrotile.solver import Patch, SolverConfig


# -- translation scans --------------------------------------------------------------


def test_zero_vector_always_matches(st12):
    p = solved_patch(st12, 2)
    report = scan_translations(p, max_len=2)
    zero = [e for e in report.entries if e.t == (0, 0)][0]
    assert zero.full_match and not zero.low_confidence
    assert zero.overlap == report.region_size == 19


def test_entry_grid_is_complete(unmarked):
    report = scan_translations(solved_patch(unmarked, 1), max_len=3)
    assert len(report.entries) == 7 * 7
    assert sorted(e.t for e in report.entries) == \
        sorted((q, r) for q in range(-3, 4) for r in range(-3, 4))


def test_constant_patch_matches_everywhere(unmarked):
    region = Region.hex(2)
    s = TileState("hex", 0, "R")
    p = Patch(unmarked, region, {c: s for c in region.cells()})
    report = scan_translations(p, max_len=2)
    assert all(e.full_match for e in report.entries)
    assert (1, 0) in report.full_matches()


def test_translation_symmetry(st12):
    report = scan_translations(solved_patch(st12, 3), max_len=3)
    by_t = {e.t: e for e in report.entries}
    for e in report.entries:
        mirror = by_t[(-e.t[0], -e.t[1])]
        assert mirror.overlap == e.overlap
        assert mirror.full_match == e.full_match


def test_small_overlaps_flagged_not_dropped(st12):
    p = solved_patch(st12, 1)
    report = scan_translations(p, max_len=3, min_overlap_fraction=0.5)
    far = [e for e in report.entries if e.t == (3, 3)][0]
    assert far.overlap == 0
    assert far.full_match            # vacuously
    assert far.low_confidence
    assert (3, 3) not in report.full_matches()
    assert (3, 3) in report.full_matches(confident_only=False)


def test_solved_patch_has_no_confident_period(st12):
    p = solved_patch(st12, 4)
    report = scan_translations(p, max_len=4)
    assert report.full_matches() == [(0, 0)]


def test_translation_report_bytes_stable(st12):
    p = solved_patch(st12, 2)
    a = scan_translations(p, max_len=2).canonical_bytes()
    b = scan_translations(p, max_len=2).canonical_bytes()
    assert a == b
    doc = json.loads(a)
    assert doc["kind"] == "translation_scan"
    assert doc["summary"]["confident_full_matches"] == [[0, 0]]


# -- torus scans --------------------------------------------------------------------


def test_unmarked_tori_all_sat(unmarked):
    report = torus_scan(4, unmarked)
    assert report.outcomes() == {"SAT": 15, "UNSAT": 0, "LIMIT": 0}
    assert report.exhaustive()


def test_hextoo6_tori_all_unsat(hextoo6):
    report = torus_scan(4, hextoo6)
    assert report.outcomes() == {"SAT": 0, "UNSAT": 15, "LIMIT": 0}


def test_one_entry_per_canonical_basis(st12):
    report = torus_scan(4, st12)
    assert [e.basis for e in report.entries] == canonical_bases(4)


def test_torus_report_bytes_stable(st12):
    a = torus_scan(3, st12).canonical_bytes()
    b = torus_scan(3, st12).canonical_bytes()
    assert a == b
    doc = json.loads(a)
    assert doc["note"] == SCAN_NOTE
    assert doc["summary"]["exhaustive"] is True
    assert len(doc["bases"]) == len(canonical_bases(3))
    for entry in doc["bases"]:
        assert set(entry) == {"u", "v", "det", "outcome", "nodes",
                              "propagations"}


def test_budgeted_scan_reports_limit_not_unsat(st12):
    report = torus_scan(9, st12, SolverConfig(node_limit=1))
    counts = report.outcomes()
    assert counts["LIMIT"] > 0
    assert not report.exhaustive()
    assert counts["SAT"] + counts["UNSAT"] + counts["LIMIT"] == \
        len(canonical_bases(9))


def test_max_det_must_be_positive(st12):
    with pytest.raises(ValueError):
        torus_scan(0, st12)


# -- loop census --------------------------------------------------------------------


def looptri_ruleset():
    """Single stroke across the e0/e1 corner; three tiles close a triangle."""
    return load_ruleset(json.dumps({
        "name": "looptri",
        "variants": ["hex"],
        "chiralities": ["R"],
        "base_edge_labels": {"hex": {"R": ["x"] * 6}},
        "k1_compat": [["x", "x"]],
        "motif_strokes": {"hex": {"R": [
            {"layer": "loop", "a": "e0", "b": "e1"},
        ]}},
    }))


def test_three_strokes_close_one_triangle():
    rs = looptri_ruleset()
    region = Region.explicit([(0, 0), (1, 0), (0, 1)])
    p = Patch(rs, region, {
        (0, 0): TileState("hex", 0, "R"),
        (1, 0): TileState("hex", 2, "R"),
        (0, 1): TileState("hex", 4, "R"),
    })
    census = loop_census(p, "loop")
    assert len(census.loops) == 1
    loop = census.loops[0]
    assert loop.segments == 3
    assert loop.diameter == 1
    assert loop.cells == ((0, 0), (0, 1), (1, 0))


def test_open_strokes_are_not_loops():
    rs = looptri_ruleset()
    region = Region.explicit([(0, 0), (1, 0)])
    p = Patch(rs, region, {
        (0, 0): TileState("hex", 0, "R"),
        (1, 0): TileState("hex", 2, "R"),
    })
    assert loop_census(p, "loop").loops == ()


def test_empty_patch_has_no_loops(st12):
    p = Patch(st12, Region.hex(2), {})
    census = loop_census(p, "stripe")
    assert census.loops == ()
    assert census.diameters() == []


def test_undeclared_layer_rejected(st12, unmarked):
    with pytest.raises(ValueError, match="declares no"):
        loop_census(solved_patch(st12, 1), "dendrite")
    with pytest.raises(ValueError, match="declares no"):
        loop_census(solved_patch(unmarked, 1), "stripe")


def test_stripe_census_shows_nested_scales(st12):
    census = loop_census(solved_patch(st12, 4), "stripe")
    assert len(census.diameters()) >= 2
    for loop in census.loops:
        assert loop.segments >= 3
        assert loop.cells
        assert loop.diameter == max(distance(a, b)
                                    for a in loop.cells for b in loop.cells)
    keys = [(l.diameter, l.segments, l.cells) for l in census.loops]
    assert keys == sorted(keys)


def test_census_bytes_stable(st12):
    p = solved_patch(st12, 3)
    a = loop_census(p, "stripe").canonical_bytes()
    b = loop_census(p, "stripe").canonical_bytes()
    assert a == b
    doc = json.loads(a)
    assert doc["kind"] == "loop_census"
    assert doc["summary"]["count"] == len(doc["loops"])
