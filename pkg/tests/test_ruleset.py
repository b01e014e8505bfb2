import json

import pytest

from dendrotile.ruleset import (
    RuleSetError,
    TileState,
    builtin_names,
    builtin_ruleset,
    load_ruleset,
    search_rulesets,
)


def doc_base(**overrides):
    doc = {
        "name": "t",
        "variants": ["hex"],
        "chiralities": ["R"],
        "base_edge_labels": {"hex": {"R": ["a", "b", "a", "b", "a", "b"]}},
        "k1_compat": [["a", "b"], ["b", "a"]],
    }
    doc.update(overrides)
    return doc


def load(doc):
    return load_ruleset(json.dumps(doc))


# -- shipped documents --------------------------------------------------------


def test_shipped_names():
    assert builtin_names() == ["hextoo6", "st12", "unmarked"]


def test_unknown_builtin_rejected():
    with pytest.raises(KeyError):
        builtin_ruleset("missing")


@pytest.mark.parametrize("name,states", [
    ("unmarked", 6), ("st12", 12), ("hextoo6", 6)])
def test_shipped_documents_load(name, states):
    rs = builtin_ruleset(name)
    assert rs.name == name
    assert len(rs.enumerate_states()) == states


def test_shipped_male_totals():
    assert not builtin_ruleset("unmarked").is_male_total()
    assert not builtin_ruleset("st12").is_male_total()
    assert builtin_ruleset("hextoo6").is_male_total()


@pytest.mark.parametrize("name", ["unmarked", "st12", "hextoo6"])
def test_document_round_trip(name):
    rs = builtin_ruleset(name)
    again = load_ruleset(json.dumps(rs.to_doc()))
    assert again.to_doc() == rs.to_doc()
    assert again.content_hash() == rs.content_hash()


# -- validation errors ----------------------------------------------------------


def test_missing_edge_labels_rejected():
    doc = doc_base()
    del doc["base_edge_labels"]["hex"]
    with pytest.raises(RuleSetError) as err:
        load(doc)
    assert "hex" in str(err.value)


def test_short_label_vector_rejected():
    doc = doc_base()
    doc["base_edge_labels"]["hex"]["R"] = ["a", "b", "a"]
    with pytest.raises(RuleSetError) as err:
        load(doc)
    assert "base_edge_labels.hex.R" in str(err.value)


def test_missing_chirality_entry_rejected():
    doc = doc_base(chiralities=["R", "F"])
    with pytest.raises(RuleSetError) as err:
        load(doc)
    assert "base_edge_labels.hex.F" in str(err.value)


def test_asymmetric_k1_rejected():
    with pytest.raises(RuleSetError) as err:
        load(doc_base(k1_compat=[["a", "b"]]))
    assert "symmetric" in str(err.value)


def test_missing_k1_rejected():
    doc = doc_base()
    del doc["k1_compat"]
    with pytest.raises(RuleSetError):
        load(doc)


def test_dangling_k1_label_rejected():
    with pytest.raises(RuleSetError) as err:
        load(doc_base(k1_compat=[["a", "z"], ["z", "a"]]))
    assert "'z'" in str(err.value)


def test_k3_without_corner_labels_rejected():
    with pytest.raises(RuleSetError) as err:
        load(doc_base(k3_compat=[["x", "x"]]))
    assert "base_corner_labels" in str(err.value)


def test_dangling_k3_label_rejected():
    doc = doc_base(
        base_corner_labels={"hex": {"R": ["x"] * 6}},
        k3_compat=[["x", "y"]])
    with pytest.raises(RuleSetError) as err:
        load(doc)
    assert "'y'" in str(err.value)


def test_bad_male_offset_rejected():
    with pytest.raises(RuleSetError):
        load(doc_base(male_edge_offset={"hex": {"R": 6}}))


def test_bad_stroke_anchor_rejected():
    doc = doc_base(motif_strokes={"hex": {"R": [
        {"layer": "x", "a": "c", "b": "e9"}]}})
    with pytest.raises(RuleSetError):
        load(doc)


def test_not_json_rejected():
    with pytest.raises(RuleSetError):
        load_ruleset("not a document")


# -- label algebra ------------------------------------------------------------


def test_edge_label_equivariance_exhaustive():
    rs = builtin_ruleset("st12")
    for s in rs.enumerate_states():
        base = rs.base_edge_labels[(s.variant, s.chirality)]
        for e in range(6):
            assert rs.edge_label(s, e) == base[(e - s.orientation) % 6]


def test_corner_label_equivariance_exhaustive():
    rs = builtin_ruleset("st12")
    for s in rs.enumerate_states():
        base = rs.base_corner_labels[(s.variant, s.chirality)]
        for k in range(6):
            assert rs.corner_label(s, k) == base[(k - s.orientation) % 6]


def test_male_edge_abs_is_a_bijection_over_orientations():
    rs = builtin_ruleset("hextoo6")
    for v in rs.variants:
        for c in rs.chiralities:
            edges = [rs.male_edge_abs(TileState(v, o, c)) for o in range(6)]
            assert sorted(edges) == list(range(6))


def test_strokes_rotate_with_orientation():
    rs = builtin_ruleset("hextoo6")
    for o in range(6):
        strokes = rs.strokes(TileState("hex", o, "R"))
        assert strokes == [("dendrite", "c", f"e{o % 6}")]


def test_k3_none_means_unconstrained():
    rs = load(doc_base())
    assert rs.k3_compat is None
    assert rs.k3_ok("anything", "at all")


def test_k3_empty_relation_blocks_everything():
    doc = doc_base(base_corner_labels={"hex": {"R": ["x"] * 6}}, k3_compat=[])
    rs = load(doc)
    assert rs.k3_compat == set()
    assert not rs.k3_ok("x", "x")


# -- parameter search ----------------------------------------------------------


def test_search_zero_free_parameters():
    result = search_rulesets(builtin_ruleset("st12").to_doc(), budget=5)
    assert len(result) == 1 and result.complete and result.examined == 1


def test_search_empty_k1_yields_nothing():
    tpl = doc_base(
        base_edge_labels={"hex": {"R": ["x"] * 6}},
        k1_compat=[])
    result = search_rulesets(tpl, budget=5)
    assert list(result) == [] and result.complete


def test_search_budget_flags_incomplete():
    tpl = doc_base(k1_compat={"$free": [[["a", "b"], ["b", "a"]], []]})
    cut = search_rulesets(tpl, budget=1)
    assert cut.examined == 1 and not cut.complete
    full = search_rulesets(tpl, budget=10)
    assert full.examined == 2 and full.complete


def test_search_skips_invalid_instantiations():
    # second choice dangles label 'z'; it must be skipped, not raised
    tpl = doc_base(k1_compat={"$free": [
        [["a", "b"], ["b", "a"]],
        [["a", "z"], ["z", "a"]]]})
    result = search_rulesets(tpl, budget=10)
    assert result.examined == 2 and result.complete


def test_search_rejects_empty_choice_list():
    tpl = doc_base(k1_compat={"$free": []})
    with pytest.raises(RuleSetError):
        search_rulesets(tpl, budget=10)


def test_search_free_male_offset_has_a_survivor():
    tpl = {
        "name": "hextoo6",
        "variants": ["hex"],
        "chiralities": ["R"],
        "base_edge_labels": {"hex": {"R": ["P", "P", "P", "M", "M", "M"]}},
        "k1_compat": [["M", "P"], ["P", "M"]],
        "male_edge_offset": {"hex": {"R": {"$free": [0, 1, 2, 3, 4, 5]}}},
    }
    result = search_rulesets(tpl, budget=10)
    assert result.complete and result.examined == 6
    assert len(result) >= 1
    # the shipped document is one of the survivors
    shipped = builtin_ruleset("hextoo6")
    offsets = {rs.male_edge_offset[("hex", "R")] for rs in result}
    assert shipped.male_edge_offset[("hex", "R")] in offsets
