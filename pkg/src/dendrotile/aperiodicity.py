"""Desk-scale aperiodicity evidence.

Three independent probes: translation scans over finite patches (does any
nonzero lattice vector map the assignment onto itself?), exhaustive solves
of every small torus quotient (a SAT torus is exactly a periodic tiling of
the plane), and a census of closed motif loops (the nested stripe
triangles).  None of these is a proof for transcribed decoration tables;
the reports say so and record what was actually checked.
"""

from __future__ import annotations

import hashlib
from typing import NamedTuple, Optional

from .hexgrid import DIRS, Region, TorusBasis, canonical_bases, distance
from .ruleset import RuleSet, canonical_json
from .solver import Patch, SolverConfig, solve_torus

SCAN_NOTE = ("exhaustive for the listed bases only; larger periods are "
             "not excluded by this scan")


def _patch_id(p: Patch) -> str:
    return hashlib.sha256(p.canonical_bytes()).hexdigest()


class TranslationEntry(NamedTuple):
    t: tuple
    overlap: int
    full_match: bool
    low_confidence: bool


class TranslationReport(NamedTuple):
    patch_id: str
    max_len: int
    min_overlap_fraction: float
    region_size: int
    entries: tuple

    def full_matches(self, confident_only: bool = True) -> list:
        return [e.t for e in self.entries if e.full_match
                and not (confident_only and e.low_confidence)]

    def to_doc(self) -> dict:
        return {
            "kind": "translation_scan",
            "patch_id": self.patch_id,
            "max_len": self.max_len,
            "min_overlap_fraction": self.min_overlap_fraction,
            "region_size": self.region_size,
            "entries": [{"t": list(e.t), "overlap": e.overlap,
                         "full_match": e.full_match,
                         "low_confidence": e.low_confidence}
                        for e in self.entries],
            "summary": {
                "confident_full_matches":
                    [list(t) for t in self.full_matches()],
            },
        }

    def canonical_bytes(self) -> bytes:
        return canonical_json(self.to_doc())


def scan_translations(p: Patch, max_len: int,
                      min_overlap_fraction: float = 0.5) -> TranslationReport:
    """Compare the patch against every translate by |q|, |r| <= max_len.

    A vector full-matches when every overlapping cell pair carries the same
    state (variant, orientation and chirality included).  Overlaps smaller
    than the requested fraction of the region still get scanned but are
    flagged low-confidence.
    """
    cells = p.region.cells()
    asg = p.assignment
    floor = min_overlap_fraction * len(cells)
    entries = []
    for tq in range(-max_len, max_len + 1):
        for tr in range(-max_len, max_len + 1):
            overlap = 0
            full = True
            for (q, r) in cells:
                shifted = (q + tq, r + tr)
                if shifted not in p.region:
                    continue
                overlap += 1
                if asg.get((q, r)) != asg.get(shifted):
                    full = False
            entries.append(TranslationEntry(
                (tq, tr), overlap, full, overlap < floor))
    return TranslationReport(_patch_id(p), max_len, min_overlap_fraction,
                             len(cells), tuple(entries))


class TorusScanEntry(NamedTuple):
    basis: TorusBasis
    outcome: str
    nodes: int
    propagations: int


class TorusScanReport(NamedTuple):
    ruleset_name: str
    ruleset_hash: str
    max_det: int
    entries: tuple

    def outcomes(self) -> dict:
        counts = {"SAT": 0, "UNSAT": 0, "LIMIT": 0}
        for e in self.entries:
            counts[e.outcome] += 1
        return counts

    def exhaustive(self) -> bool:
        return self.outcomes()["LIMIT"] == 0

    def to_doc(self) -> dict:
        counts = self.outcomes()
        return {
            "kind": "torus_scan",
            "ruleset": {"name": self.ruleset_name, "hash": self.ruleset_hash},
            "max_det": self.max_det,
            "note": SCAN_NOTE,
            "bases": [{"u": list(e.basis.u), "v": list(e.basis.v),
                       "det": e.basis.det, "outcome": e.outcome,
                       "nodes": e.nodes, "propagations": e.propagations}
                      for e in self.entries],
            "summary": {"SAT": counts["SAT"], "UNSAT": counts["UNSAT"],
                        "LIMIT": counts["LIMIT"],
                        "exhaustive": self.exhaustive()},
        }

    def canonical_bytes(self) -> bytes:
        return canonical_json(self.to_doc())


def torus_scan(max_det: int, rs: RuleSet,
               cfg: Optional[SolverConfig] = None) -> TorusScanReport:
    """Solve every canonical torus basis with 1 <= |det| <= max_det.

    UNSAT entries are exhaustive-search claims; LIMIT entries (possible only
    under an explicit node budget) are flagged, never merged into UNSAT.
    """
    if max_det < 1:
        raise ValueError("max_det must be >= 1")
    entries = []
    for basis in canonical_bases(max_det):
        res = solve_torus(basis, rs, cfg)
        entries.append(TorusScanEntry(basis, res.outcome, res.nodes,
                                      res.propagations))
    return TorusScanReport(rs.name, rs.content_hash(), max_det,
                           tuple(entries))


class Loop(NamedTuple):
    segments: int
    diameter: int
    cells: tuple

    def to_doc(self) -> dict:
        return {"segments": self.segments, "diameter": self.diameter,
                "cells": [list(c) for c in self.cells]}


class LoopCensus(NamedTuple):
    patch_id: str
    layer: str
    loops: tuple

    def diameters(self) -> list:
        return sorted({l.diameter for l in self.loops})

    def to_doc(self) -> dict:
        return {
            "kind": "loop_census",
            "patch_id": self.patch_id,
            "layer": self.layer,
            "loops": [l.to_doc() for l in self.loops],
            "summary": {"count": len(self.loops),
                        "distinct_diameters": self.diameters()},
        }

    def canonical_bytes(self) -> bytes:
        return canonical_json(self.to_doc())


def _stroke_node(cell, anchor):
    # Doubled axial coordinates make edge midpoints integral and shared:
    # the midpoint of edge e of (q, r) equals that of edge e+3 next door.
    q, r = cell
    if anchor == "c":
        return (2 * q, 2 * r)
    dq, dr = DIRS[int(anchor[1])]
    return (2 * q + dq, 2 * r + dr)


def loop_census(p: Patch, layer: str) -> LoopCensus:
    """Closed loops in one motif layer of an assigned patch.

    With at most one stroke endpoint per cell per edge midpoint the stroke
    graph splits into simple paths and simple cycles; the cycles are the
    loops.  Each loop reports its segment count, the cells its segments
    came from, and their lattice diameter.
    """
    rs = p.ruleset
    if layer not in rs.stroke_layers():
        raise ValueError(f"rule set declares no {layer!r} strokes")
    adj: dict = {}
    seg_cells: dict = {}
    for cell in sorted(p.assignment):
        for lay, a, b in rs.strokes(p.assignment[cell]):
            if lay != layer:
                continue
            na, nb = _stroke_node(cell, a), _stroke_node(cell, b)
            adj.setdefault(na, []).append(nb)
            adj.setdefault(nb, []).append(na)
            seg_cells[frozenset((na, nb))] = cell
    loops = []
    seen = set()
    for start in sorted(adj):
        if start in seen or len(adj[start]) != 2:
            continue
        walk = [start]
        prev, cur = None, start
        closed = False
        while True:
            if len(adj[cur]) != 2:
                break
            nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
            if nxt == start:
                closed = True
                break
            if nxt in seen or len(adj[nxt]) != 2:
                break
            prev, cur = cur, nxt
            walk.append(cur)
        seen.update(walk)
        if not closed:
            continue
        cells = sorted({seg_cells[frozenset((walk[i], walk[(i + 1) % len(walk)]))]
                        for i in range(len(walk))})
        diam = max(distance(a, b) for a in cells for b in cells)
        loops.append(Loop(len(walk), diam, tuple(cells)))
    loops.sort(key=lambda l: (l.diameter, l.segments, l.cells))
    return LoopCensus(_patch_id(p), layer, tuple(loops))
