"""Constraint engine over patches, regions, and torus quotients.

Partial-patch queries (verify_patch, legal_states, propagate) gate each K3
clause on its pivot: the clause binds the two flanking cells only once the
pivot is placed.  Full searches (solve_region, solve_torus, count_solutions)
compile to flat arrays and run a backend kernel; for complete assignments the
gating distinction vanishes, so the kernels apply K3 unconditionally.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import kernel
from .hexgrid import Cell, Region, TorusBasis, neighbor
from .ruleset import RuleSet, TileState, canonical_json, k3_geometry

SAT = "SAT"
UNSAT = "UNSAT"
LIMIT = "LIMIT"

COUNT_CELL_LIMIT = 9


class Contradiction(Exception):
    """Propagation emptied a cell's domain."""

    def __init__(self, cell: Cell):
        self.cell = cell
        super().__init__(f"domain of cell {cell} is empty")


@dataclass(frozen=True)
class SolverConfig:
    seed: int = 0
    node_limit: int = 50_000_000
    backend: str = "auto"


@dataclass
class SolveResult:
    outcome: str
    assignment: dict[Cell, TileState] | None
    nodes: int
    propagations: int
    solutions: int
    wall_time: float  # informational only; never serialized

    def to_doc(self) -> dict:
        doc = {
            "outcome": self.outcome,
            "nodes": self.nodes,
            "propagations": self.propagations,
            "solutions": self.solutions,
            "assignment": None,
        }
        if self.assignment is not None:
            doc["assignment"] = _assignment_doc(self.assignment)
        return doc

    def canonical_bytes(self) -> bytes:
        return canonical_json(self.to_doc())


def _assignment_doc(assignment: dict[Cell, TileState]) -> list[dict]:
    return [
        {"q": q, "r": r, "variant": s.variant,
         "orientation": s.orientation, "chirality": s.chirality}
        for (q, r), s in sorted(assignment.items())
    ]


class Patch:
    """A rule set, a region, and a partial assignment inside it."""

    def __init__(self, ruleset: RuleSet, region: Region,
                 assignment: dict[Cell, TileState] | None = None):
        self.ruleset = ruleset
        self.region = region
        self.assignment = dict(assignment or {})
        for c in self.assignment:
            if c not in region:
                raise ValueError(f"assigned cell {c} lies outside the region")

    def copy(self) -> "Patch":
        return Patch(self.ruleset, self.region, self.assignment)

    def to_doc(self) -> dict:
        return {
            "ruleset": {"name": self.ruleset.name,
                        "hash": self.ruleset.content_hash()},
            "region": self.region.descriptor(),
            "assignment": _assignment_doc(self.assignment),
        }

    def canonical_bytes(self) -> bytes:
        return canonical_json(self.to_doc())

    @classmethod
    def from_doc(cls, doc: dict, ruleset: RuleSet) -> "Patch":
        ref = doc.get("ruleset", {})
        if ref.get("name") != ruleset.name:
            raise ValueError(f"patch was written for rule set {ref.get('name')!r}, "
                             f"got {ruleset.name!r}")
        if ref.get("hash") != ruleset.content_hash():
            raise ValueError("rule-set hash mismatch: document and loaded tables differ")
        region = Region.from_descriptor(doc["region"])
        assignment = {}
        for ent in doc.get("assignment", []):
            c = (int(ent["q"]), int(ent["r"]))
            s = TileState(ent["variant"], int(ent["orientation"]), ent["chirality"])
            if s.variant not in ruleset.variants or \
                    s.chirality not in ruleset.chiralities or \
                    not 0 <= s.orientation < 6:
                raise ValueError(f"assignment at {c} names unknown state {s}")
            if c in assignment:
                raise ValueError(f"duplicate assignment for cell {c}")
            assignment[c] = s
        return cls(ruleset, region, assignment)


# ---------------------------------------------------------------------------
# partial-patch queries


def verify_patch(p: Patch) -> list[dict]:
    """All violated clauses among the assigned cells.

    Clause kinds: "k1" (shared edge), "k3" (flanking pair, checked only when
    the pivot is assigned too), "acyclic" (a directed male-joint cycle, one
    violation per cycle listing its cells in walk order from the least cell).
    """
    rs = p.ruleset
    asg = p.assignment
    out = []
    cells_sorted = sorted(asg)

    for a in cells_sorted:
        sa = asg[a]
        for e in range(3):
            b = neighbor(a, e)
            sb = asg.get(b)
            if sb is None:
                continue
            la = rs.edge_label(sa, e)
            lb = rs.edge_label(sb, (e + 3) % 6)
            if not rs.k1_ok(la, lb):
                out.append({"clause": "k1", "cells": [list(a), list(b)],
                            "edge": e, "labels": [la, lb]})

    if rs.k3_compat is not None:
        for a in cells_sorted:
            for e in range(3):
                g = k3_geometry(a, e)
                sp = asg.get(g.c_plus)
                sm = asg.get(g.c_minus)
                if sp is None or sm is None:
                    continue
                lp = rs.corner_label(sp, g.plus_corner)
                lm = rs.corner_label(sm, g.minus_corner)
                if not rs.k3_ok(lp, lm):
                    out.append({"clause": "k3",
                                "cells": [list(a), list(g.c_plus), list(g.c_minus)],
                                "edge": e, "labels": [lp, lm]})

    visited = set()
    for start in cells_sorted:
        if start in visited:
            continue
        path = []
        pos = {}
        x = start
        while x is not None and x not in visited and x in asg:
            if x in pos:
                cyc = path[pos[x]:]
                k = cyc.index(min(cyc))
                cyc = cyc[k:] + cyc[:k]
                out.append({"clause": "acyclic",
                            "cells": [list(c) for c in cyc]})
                break
            pos[x] = len(path)
            path.append(x)
            e = rs.male_edge_abs(asg[x])
            x = neighbor(x, e) if e is not None else None
        visited.update(path)

    return out


def _male_walk_closes_cycle(p: Patch, c: Cell, s: TileState) -> bool:
    """Would placing s at c close a directed male-joint cycle right now?"""
    rs = p.ruleset
    asg = p.assignment
    e = rs.male_edge_abs(s)
    if e is None:
        return False
    x = neighbor(c, e)
    steps = 0
    while True:
        if x == c:
            return True
        sx = asg.get(x)
        if sx is None:
            return False
        ex = rs.male_edge_abs(sx)
        if ex is None:
            return False
        x = neighbor(x, ex)
        steps += 1
        if steps > len(asg):
            # walked into a pre-existing cycle that avoids c
            return False


def _placement_ok(p: Patch, c: Cell, s: TileState) -> bool:
    """Local clause check for one candidate placement on a clean patch."""
    rs = p.ruleset
    asg = p.assignment

    for e in range(6):
        sb = asg.get(neighbor(c, e))
        if sb is None:
            continue
        if not rs.k1_ok(rs.edge_label(s, e), rs.edge_label(sb, (e + 3) % 6)):
            return False

    if rs.k3_compat is not None:
        for e in range(3):
            # c as the pivot: both flanks already assigned
            g = k3_geometry(c, e)
            sp = asg.get(g.c_plus)
            sm = asg.get(g.c_minus)
            if sp is not None and sm is not None:
                if not rs.k3_ok(rs.corner_label(sp, g.plus_corner),
                                rs.corner_label(sm, g.minus_corner)):
                    return False
            # c as the plus flank of the pivot behind edge (e+4)
            piv = neighbor(c, (e + 4) % 6)
            if piv in asg:
                gp = k3_geometry(piv, e)
                sm = asg.get(gp.c_minus)
                if sm is not None and not rs.k3_ok(
                        rs.corner_label(s, gp.plus_corner),
                        rs.corner_label(sm, gp.minus_corner)):
                    return False
            # c as the minus flank of the pivot behind edge (e+2)
            piv = neighbor(c, (e + 2) % 6)
            if piv in asg:
                gm = k3_geometry(piv, e)
                sp = asg.get(gm.c_plus)
                if sp is not None and not rs.k3_ok(
                        rs.corner_label(sp, gm.plus_corner),
                        rs.corner_label(s, gm.minus_corner)):
                    return False

    return not _male_walk_closes_cycle(p, c, s)


def legal_states(p: Patch, c: Cell) -> list[TileState]:
    """States placeable at c now, in enumeration order.

    Empty whenever the patch already carries a violation: no placement can
    repair one, so nothing is legal by the produces-a-clean-patch reading.
    """
    if c not in p.region:
        raise ValueError(f"cell {c} is outside the region")
    if c in p.assignment:
        raise ValueError(f"cell {c} is already assigned")
    if verify_patch(p):
        return []
    return [s for s in p.ruleset.enumerate_states() if _placement_ok(p, c, s)]


def propagate(p: Patch) -> dict[Cell, list[TileState]]:
    """Arc-consistent domains for every region cell under the current patch.

    K1 binds every in-region adjacency; a K3 clause binds its flanks once its
    pivot is assigned, and wipes an unassigned pivot whose flanks are already
    assigned incompatibly.  Candidate states whose male joint would close a
    directed cycle through assigned cells are removed up front.  Pruning is
    sound, never complete: surviving domains overapproximate true extensions.
    Raises Contradiction when a domain empties.
    """
    rs = p.ruleset
    asg = p.assignment
    cells = p.region.cells()
    index = {c: i for i, c in enumerate(cells)}
    states = rs.enumerate_states()
    n_states = len(states)
    full = (1 << n_states) - 1
    state_index = {s: i for i, s in enumerate(states)}

    dom = []
    for c in cells:
        if c in asg:
            dom.append(1 << state_index[asg[c]])
        else:
            m = 0
            for k, s in enumerate(states):
                if not _male_walk_closes_cycle(p, c, s):
                    m |= 1 << k
            dom.append(m)

    # binary constraints as support tables, reusing the kernel's relation ids
    problem_rel_row, problem_rel_col = _relation_tables(rs, states)
    arcs = []  # (x, y, rel)
    for a in cells:
        ia = index[a]
        for e in range(3):
            b = neighbor(a, e)
            if b in index:
                arcs.append((ia, index[b], e))
        if rs.k3_compat is not None:
            for e in range(3):
                g = k3_geometry(a, e)
                ip = index.get(g.c_plus)
                im = index.get(g.c_minus)
                if ip is None or im is None:
                    continue
                if a in asg:
                    arcs.append((ip, im, 3 + e))
                elif g.c_plus in asg and g.c_minus in asg:
                    lp = rs.corner_label(asg[g.c_plus], g.plus_corner)
                    lm = rs.corner_label(asg[g.c_minus], g.minus_corner)
                    if not rs.k3_ok(lp, lm):
                        dom[ia] = 0  # any placement would activate a broken clause

    for i, c in enumerate(cells):
        if dom[i] == 0:
            raise Contradiction(c)

    arcs_of = {}
    for t, (x, y, _rel) in enumerate(arcs):
        arcs_of.setdefault(x, []).append(2 * t)
        arcs_of.setdefault(y, []).append(2 * t + 1)

    queue = deque(range(2 * len(arcs)))
    queued = [True] * (2 * len(arcs))
    while queue:
        arc = queue.popleft()
        queued[arc] = False
        x, y, rel = arcs[arc >> 1]
        if arc & 1:
            src, tgt, table = y, x, problem_rel_col[rel]
        else:
            src, tgt, table = x, y, problem_rel_row[rel]
        sup = 0
        m = dom[src]
        while m:
            b = m & -m
            sup |= table[b.bit_length() - 1]
            m ^= b
        new = dom[tgt] & sup
        if new != dom[tgt]:
            dom[tgt] = new
            if new == 0:
                raise Contradiction(cells[tgt])
            for a2 in arcs_of.get(tgt, []):
                if not queued[a2]:
                    queued[a2] = True
                    queue.append(a2)

    return {
        c: [states[k] for k in range(n_states) if dom[i] >> k & 1]
        for i, c in enumerate(cells)
    }


def _relation_tables(rs: RuleSet, states: list[TileState]):
    """Support masks per relation id: 0..2 K1 at edge e, 3..5 K3 at edge e-3."""
    n = len(states)
    rel_row = [[0] * n for _ in range(6)]
    rel_col = [[0] * n for _ in range(6)]
    for e in range(3):
        for ia, sa in enumerate(states):
            la = rs.edge_label(sa, e)
            for ib, sb in enumerate(states):
                if rs.k1_ok(la, rs.edge_label(sb, (e + 3) % 6)):
                    rel_row[e][ia] |= 1 << ib
                    rel_col[e][ib] |= 1 << ia
        if rs.k3_compat is not None:
            for ip, sp in enumerate(states):
                lp = rs.corner_label(sp, (e + 4) % 6)
                for im, sm in enumerate(states):
                    if rs.k3_ok(lp, rs.corner_label(sm, (e + 1) % 6)):
                        rel_row[3 + e][ip] |= 1 << im
                        rel_col[3 + e][im] |= 1 << ip
    return rel_row, rel_col


# ---------------------------------------------------------------------------
# full search


def _run_backend(problem: kernel.CompiledProblem, cfg: SolverConfig,
                 mode: int) -> SolveResult:
    backend = kernel.resolve_backend(cfg.backend)
    orders = kernel.value_orders(problem.n_cells, problem.n_states, cfg.seed)
    t0 = time.perf_counter()
    res = backend.run(problem.nbr, problem.unary, problem.inst_x,
                      problem.inst_y, problem.inst_rel, problem.rel_row,
                      problem.rel_col, problem.male_abs, orders,
                      cfg.node_limit, mode)
    wall = time.perf_counter() - t0
    assignment = None
    if res["assignment"] is not None:
        assignment = {problem.cells[i]: problem.states[s]
                      for i, s in enumerate(res["assignment"])}
    return SolveResult(res["outcome"], assignment, res["nodes"],
                       res["eliminations"], res["solutions"], wall)


def compile_region(rs: RuleSet, region: Region) -> kernel.CompiledProblem:
    def nbr_of(c, e):
        t = neighbor(c, e)
        return t if t in region else None

    return kernel.compile_problem(rs, region.cells(), nbr_of)


def compile_torus(rs: RuleSet, basis: TorusBasis) -> kernel.CompiledProblem:
    def nbr_of(c, e):
        return basis.reduce(neighbor(c, e))

    return kernel.compile_problem(rs, basis.cells(), nbr_of)


def solve_region(region: Region, rs: RuleSet,
                 cfg: SolverConfig | None = None,
                 fixed: dict[Cell, object] | None = None) -> SolveResult:
    """Search for a complete valid assignment of the region.

    `fixed` restricts cells up front, to a single TileState or any iterable
    of allowed ones.
    """
    cfg = cfg or SolverConfig()
    problem = compile_region(rs, region)
    if fixed:
        state_index = {s: i for i, s in enumerate(problem.states)}
        cell_index = {c: i for i, c in enumerate(problem.cells)}
        for c, allowed in fixed.items():
            if isinstance(allowed, TileState):
                allowed = (allowed,)
            mask = 0
            for s in allowed:
                mask |= 1 << state_index[s]
            problem.unary[cell_index[c]] &= np.uint64(mask)
    return _run_backend(problem, cfg, mode=0)


def count_solutions(region: Region, rs: RuleSet,
                    cfg: SolverConfig | None = None) -> int:
    """Exact number of complete valid assignments (exhaustive)."""
    n = len(region)
    if n > COUNT_CELL_LIMIT:
        raise ValueError(f"count_solutions is guarded to regions of at most "
                         f"{COUNT_CELL_LIMIT} cells; this one has {n}")
    cfg = cfg or SolverConfig(node_limit=10 ** 15)
    problem = compile_region(rs, region)
    res = _run_backend(problem, cfg, mode=1)
    if res.outcome == LIMIT:
        raise RuntimeError("node limit reached while counting")
    return res.solutions


def solve_torus(basis: TorusBasis, rs: RuleSet,
                cfg: SolverConfig | None = None) -> SolveResult:
    """Exhaustive search over the |det| cell classes of a torus quotient.

    UNSAT is a proof that no tiling is periodic with the basis's lattice.
    """
    if basis.det == 0:
        raise ValueError("degenerate basis: determinant is zero")
    cfg = cfg or SolverConfig(node_limit=10 ** 15)
    problem = compile_torus(rs, basis)
    return _run_backend(problem, cfg, mode=0)
