"""Rule sets: decorated tile definitions and their matching relations.

Decorations are data.  A rule set lists, per (variant, chirality), base
6-vectors of edge and corner labels for orientation 0, plus the relations:

  k1_compat: symmetric relation over edge-label pairs, applied across every
             shared edge (label of A at e vs label of B at (e+3) % 6).
  k3_compat: relation over corner-label pairs, applied to the two "third"
             cells at the ends of a lattice edge (see k3_geometry).

Orientation rotates label vectors in place: label(state, i) is
base[(i - orientation) % 6].  Chirality F tables are stored explicitly;
mirroring conventions live in whatever produced the document, not here.

A variant/chirality may also carry a male joint on one edge
(male_edge_offset, rotated the opposite way: absolute edge is
(offset + orientation) % 6) and motif strokes anchored at edge midpoints
("e0".."e5") or the cell center ("c").
"""

from __future__ import annotations

import hashlib
import json
from typing import NamedTuple

from .hexgrid import Cell, neighbor

CHIRALITIES = ("R", "F")
ANCHORS = ("e0", "e1", "e2", "e3", "e4", "e5", "c")


class TileState(NamedTuple):
    variant: str
    orientation: int
    chirality: str


class Stroke(NamedTuple):
    layer: str
    a: str
    b: str


class RuleSetError(ValueError):
    """Raised on malformed rule-set documents; carries the offending path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class RuleSet:
    def __init__(self, name: str, variants: list[str], chiralities: list[str],
                 base_edge_labels: dict, base_corner_labels: dict | None,
                 k1_compat: set, k3_compat: set | None,
                 male_edge_offset: dict, motif_strokes: dict):
        self.name = name
        self.variants = variants
        self.chiralities = chiralities
        self.base_edge_labels = base_edge_labels      # (variant, chir) -> [6 labels]
        self.base_corner_labels = base_corner_labels  # (variant, chir) -> [6] or None
        self.k1_compat = k1_compat                    # set of (a, b), symmetric
        self.k3_compat = k3_compat                    # set of (plus, minus) or None
        self.male_edge_offset = male_edge_offset      # (variant, chir) -> int or None
        self.motif_strokes = motif_strokes            # (variant, chir) -> [Stroke]

    # -- state space --------------------------------------------------------

    def enumerate_states(self) -> list[TileState]:
        """All declared states, in (variant, chirality, orientation) order."""
        out = []
        for v in self.variants:
            for c in self.chiralities:
                for o in range(6):
                    out.append(TileState(v, o, c))
        return out

    def edge_label(self, state: TileState, e: int) -> str:
        base = self.base_edge_labels[(state.variant, state.chirality)]
        return base[(e - state.orientation) % 6]

    def corner_label(self, state: TileState, k: int) -> str | None:
        if self.base_corner_labels is None:
            return None
        base = self.base_corner_labels[(state.variant, state.chirality)]
        return base[(k - state.orientation) % 6]

    def male_edge_abs(self, state: TileState) -> int | None:
        off = self.male_edge_offset.get((state.variant, state.chirality))
        if off is None:
            return None
        return (off + state.orientation) % 6

    def strokes(self, state: TileState) -> list[tuple[str, str, str]]:
        """Motif strokes of a state with anchors rotated into place."""
        out = []
        for s in self.motif_strokes.get((state.variant, state.chirality), []):
            out.append((s.layer, _rot_anchor(s.a, state.orientation),
                        _rot_anchor(s.b, state.orientation)))
        return out

    def stroke_layers(self) -> list[str]:
        layers = set()
        for strokes in self.motif_strokes.values():
            for s in strokes:
                layers.add(s.layer)
        return sorted(layers)

    def is_male_total(self) -> bool:
        return all(
            self.male_edge_offset.get((v, c)) is not None
            for v in self.variants for c in self.chiralities
        )

    def k1_ok(self, la: str, lb: str) -> bool:
        return (la, lb) in self.k1_compat

    def k3_ok(self, lplus: str, lminus: str) -> bool:
        if self.k3_compat is None:
            return True
        return (lplus, lminus) in self.k3_compat

    # -- document form ------------------------------------------------------

    def to_doc(self) -> dict:
        def per_vc(table, conv=lambda x: x):
            return {
                v: {c: conv(table[(v, c)]) for c in self.chiralities}
                for v in self.variants
            }

        doc = {
            "name": self.name,
            "variants": list(self.variants),
            "chiralities": list(self.chiralities),
            "base_edge_labels": per_vc(self.base_edge_labels, list),
            "k1_compat": sorted(list(p) for p in self.k1_compat),
            "male_edge_offset": per_vc(self.male_edge_offset),
            "motif_strokes": per_vc(
                self.motif_strokes,
                lambda ss: [{"layer": s.layer, "a": s.a, "b": s.b} for s in ss],
            ),
        }
        if self.base_corner_labels is not None:
            doc["base_corner_labels"] = per_vc(self.base_corner_labels, list)
        if self.k3_compat is not None:
            doc["k3_compat"] = sorted(list(p) for p in self.k3_compat)
        return doc

    def canonical_bytes(self) -> bytes:
        return canonical_json(self.to_doc())

    def content_hash(self) -> str:
        return hashlib.sha256(self.canonical_bytes()).hexdigest()

    @classmethod
    def from_doc(cls, doc: dict) -> "RuleSet":
        return _parse(doc)


def canonical_json(doc: dict) -> bytes:
    """The one serialization used for every document this package emits."""
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("ascii")


def load_ruleset(text: str | bytes) -> RuleSet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RuleSetError("$", f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise RuleSetError("$", "document must be an object")
    return _parse(doc)


def _parse(doc: dict) -> RuleSet:
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        raise RuleSetError("name", "must be a non-empty string")

    variants = doc.get("variants")
    if not isinstance(variants, list) or not variants or \
            not all(isinstance(v, str) for v in variants):
        raise RuleSetError("variants", "must be a non-empty list of strings")
    if len(set(variants)) != len(variants):
        raise RuleSetError("variants", "duplicate variant names")

    chiralities = doc.get("chiralities")
    if not isinstance(chiralities, list) or not chiralities or \
            any(c not in CHIRALITIES for c in chiralities):
        raise RuleSetError("chiralities", "must be a non-empty subset of ['R', 'F']")
    if len(set(chiralities)) != len(chiralities):
        raise RuleSetError("chiralities", "duplicate chirality")

    def parse_vc_table(key: str, parse_entry, required: bool):
        table_doc = doc.get(key)
        if table_doc is None:
            if required:
                raise RuleSetError(key, "missing required table")
            return None
        table = {}
        for v in variants:
            vd = table_doc.get(v) if isinstance(table_doc, dict) else None
            if vd is None:
                raise RuleSetError(f"{key}.{v}", "missing entry for variant")
            for c in chiralities:
                if not isinstance(vd, dict) or c not in vd:
                    raise RuleSetError(f"{key}.{v}.{c}",
                                       "missing entry for (variant, chirality)")
                table[(v, c)] = parse_entry(f"{key}.{v}.{c}", vd[c])
        return table

    def parse_labels6(path, val):
        if not isinstance(val, list) or len(val) != 6 or \
                not all(isinstance(x, str) and x for x in val):
            raise RuleSetError(path, "must be a 6-vector of label strings")
        return list(val)

    base_edge = parse_vc_table("base_edge_labels", parse_labels6, required=True)
    base_corner = parse_vc_table("base_corner_labels", parse_labels6, required=False)

    def parse_pairs(key):
        pairs_doc = doc.get(key)
        if pairs_doc is None:
            return None
        if not isinstance(pairs_doc, list):
            raise RuleSetError(key, "must be a list of label pairs")
        pairs = set()
        for i, p in enumerate(pairs_doc):
            if not isinstance(p, list) or len(p) != 2 or \
                    not all(isinstance(x, str) for x in p):
                raise RuleSetError(f"{key}[{i}]", "each entry must be a pair of labels")
            pairs.add((p[0], p[1]))
        return pairs

    k1 = parse_pairs("k1_compat")
    if k1 is None:
        raise RuleSetError("k1_compat", "missing required relation")
    for a, b in sorted(k1):
        if (b, a) not in k1:
            raise RuleSetError("k1_compat", f"not symmetric: [{a!r}, {b!r}] lacks mirror")

    edge_labels_used = {l for v6 in base_edge.values() for l in v6}
    for a, b in sorted(k1):
        for l in (a, b):
            if l not in edge_labels_used:
                raise RuleSetError("k1_compat", f"references unknown edge label {l!r}")

    k3 = parse_pairs("k3_compat")
    if k3 is not None:
        if base_corner is None:
            raise RuleSetError("k3_compat",
                               "present without base_corner_labels")
        corner_labels_used = {l for v6 in base_corner.values() for l in v6}
        for p, m in sorted(k3):
            for l in (p, m):
                if l not in corner_labels_used:
                    raise RuleSetError("k3_compat",
                                       f"references unknown corner label {l!r}")

    def parse_offset(path, val):
        if val is None:
            return None
        if not isinstance(val, int) or not (0 <= val < 6):
            raise RuleSetError(path, "must be null or an edge index 0..5")
        return val

    male = parse_vc_table("male_edge_offset", parse_offset, required=False)
    if male is None:
        male = {(v, c): None for v in variants for c in chiralities}

    def parse_strokes(path, val):
        if not isinstance(val, list):
            raise RuleSetError(path, "must be a list of strokes")
        out = []
        for i, s in enumerate(val):
            if not isinstance(s, dict) or \
                    not all(k in s for k in ("layer", "a", "b")):
                raise RuleSetError(f"{path}[{i}]",
                                   "stroke needs layer, a, b")
            if s["a"] not in ANCHORS or s["b"] not in ANCHORS:
                raise RuleSetError(f"{path}[{i}]",
                                   f"anchors must be one of {ANCHORS}")
            out.append(Stroke(str(s["layer"]), s["a"], s["b"]))
        return out

    strokes = parse_vc_table("motif_strokes", parse_strokes, required=False)
    if strokes is None:
        strokes = {(v, c): [] for v in variants for c in chiralities}

    return RuleSet(name, list(variants), list(chiralities), base_edge,
                   base_corner, k1, k3, male, strokes)


def _rot_anchor(a: str, orientation: int) -> str:
    if a == "c":
        return a
    return f"e{(int(a[1]) + orientation) % 6}"


def mirror_anchor(a: str) -> str:
    if a == "c":
        return a
    return f"e{(6 - int(a[1])) % 6}"


# ---------------------------------------------------------------------------
# K3 geometry: the two "third" cells at the ends of a lattice edge.


class K3Instance(NamedTuple):
    pivot: Cell      # the cell whose edge e in 0..2 names the lattice edge
    e: int
    c_plus: Cell     # its corner (e+4) % 6 sits at one end of the edge
    c_minus: Cell    # its corner (e+1) % 6 sits at the other end

    @property
    def plus_corner(self) -> int:
        return (self.e + 4) % 6

    @property
    def minus_corner(self) -> int:
        return (self.e + 1) % 6


def k3_geometry(pivot: Cell, e: int) -> K3Instance:
    """End cells flanking the lattice edge between pivot and neighbor(pivot, e)."""
    return K3Instance(pivot, e, neighbor(pivot, (e + 1) % 6),
                      neighbor(pivot, (e + 5) % 6))


# ---------------------------------------------------------------------------
# Shipped documents.


def builtin_names() -> list[str]:
    from importlib import resources

    root = resources.files("dendrotile").joinpath("rulesets")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def builtin_ruleset(name: str) -> RuleSet:
    """Load one of the rule-set documents shipped inside the package."""
    from importlib import resources

    path = resources.files("dendrotile").joinpath(f"rulesets/{name}.json")
    try:
        text = path.read_text("ascii")
    except FileNotFoundError:
        raise KeyError(f"no built-in rule set named {name!r}") from None
    return load_ruleset(text)


# ---------------------------------------------------------------------------
# Parameter search.  A template is a rule-set document in which any value may
# be replaced by {"$free": [choice, ...]}; choices may be null to mean "field
# absent".  Instantiations are filtered by a fixed empirical criterion:
# a radius-2 region must be satisfiable and every torus quotient with
# |det| <= 4 must be unsatisfiable.


FREE_KEY = "$free"


class SearchResult(list):
    """Survivors of a rule-set search, in instantiation order.

    ``examined`` counts instantiations tried (including ones rejected by
    document validation).  ``complete`` is False when the budget ran out
    before the grid was exhausted.
    """

    def __init__(self, items, examined: int, complete: bool):
        super().__init__(items)
        self.examined = examined
        self.complete = complete


def _collect_free(node, path: str, out: list) -> None:
    if isinstance(node, dict):
        if set(node.keys()) == {FREE_KEY}:
            choices = node[FREE_KEY]
            if not isinstance(choices, list) or not choices:
                raise RuleSetError(path or "$", "$free needs a non-empty list")
            out.append((path, node))
            return
        for k in sorted(node):
            _collect_free(node[k], f"{path}.{k}" if path else k, out)
    elif isinstance(node, list):
        for i, x in enumerate(node):
            _collect_free(x, f"{path}[{i}]", out)


def _substitute(node, values: dict):
    if isinstance(node, dict):
        if set(node.keys()) == {FREE_KEY}:
            return values[id(node)]
        return {k: _substitute(v, values) for k, v in node.items()
                if not (isinstance(v, dict) and set(v) == {FREE_KEY}
                        and values[id(v)] is None)}
    if isinstance(node, list):
        return [_substitute(x, values) for x in node]
    return node


def _passes_filter(rs: RuleSet) -> bool:
    from .hexgrid import Region, canonical_bases
    from .solver import solve_region, solve_torus

    if solve_region(Region.hex(2), rs).outcome != "SAT":
        return False
    return all(solve_torus(b, rs).outcome == "UNSAT"
               for b in canonical_bases(4))


def search_rulesets(template: dict, budget: int) -> SearchResult:
    """Enumerate the template's free-parameter grid and keep the survivors.

    The grid expands in document order (sorted keys, list position); the
    rightmost slot varies fastest.  Instantiations that fail document
    validation are skipped but still count against the budget.
    """
    import itertools

    slots: list = []
    _collect_free(template, "", slots)
    nodes = [node for _, node in slots]
    survivors = []
    examined = 0
    complete = True
    for combo in itertools.product(*(node[FREE_KEY] for node in nodes)):
        if examined >= budget:
            complete = False
            break
        examined += 1
        doc = _substitute(template, dict(zip(map(id, nodes), combo)))
        try:
            rs = load_ruleset(json.dumps(doc))
        except RuleSetError:
            continue
        if _passes_filter(rs):
            survivors.append(rs)
    return SearchResult(survivors, examined, complete)
