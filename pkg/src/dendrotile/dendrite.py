"""Male-joint graph analysis and the tiler's placement order.

Every male edge points at the neighbor that must cover it, so an assigned
patch induces a directed graph with out-degree at most one per cell.  Read
as a dependency relation (tab owner before covering tile), acyclicity is
exactly what makes a physical build sequence possible, and any topological
order that starts from the in-degree-0 cells is a legal sequence for the
tiler.
"""

from __future__ import annotations

import heapq
from typing import NamedTuple, Optional, Sequence

from .hexgrid import Cell, neighbor
from .solver import Patch


class MotifGraph(NamedTuple):
    nodes: tuple
    out: dict                     # internal edges, cell -> covering cell
    dangling: tuple               # male edge leaves the assigned patch
    warning: Optional[str]

    def in_degree(self, cell) -> int:
        return sum(1 for t in self.out.values() if t == cell)

    def component_count(self) -> int:
        """Weakly connected components, counting isolated cells."""
        parent = {c: c for c in self.nodes}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.out.items():
            parent[find(a)] = find(b)
        return len({find(c) for c in self.nodes})


class CycleError(ValueError):
    """A directed male-joint cycle; carries the cells in walk order."""

    def __init__(self, cells):
        self.cells = list(cells)
        super().__init__(f"male-joint cycle through {self.cells}")


class OrderViolation(NamedTuple):
    child: Cell
    parent: Cell
    child_index: int
    parent_index: int


def motif_graph(p: Patch) -> MotifGraph:
    """Directed male-edge graph of the assigned cells of ``p``."""
    rs = p.ruleset
    if all(rs.male_edge_offset[(v, c)] is None
           for v in rs.variants for c in rs.chiralities):
        return MotifGraph((), {}, (), "rule set has no male edges")
    nodes = tuple(sorted(p.assignment))
    out = {}
    dangling = []
    for cell in nodes:
        e = rs.male_edge_abs(p.assignment[cell])
        if e is None:
            continue
        target = neighbor(cell, e)
        if target in p.region and target in p.assignment:
            out[cell] = target
        else:
            dangling.append(cell)
    return MotifGraph(nodes, out, tuple(dangling), None)


def find_cycle(g: MotifGraph) -> Optional[list]:
    """A directed cycle as a cell list, or None.

    Out-degree <= 1 means each weak component holds at most one cycle, and
    chasing the out-map from any node either dead-ends or lands on it.
    """
    state = {}                    # 1 = on current walk, 2 = exhausted
    for start in g.nodes:
        if state.get(start):
            continue
        path = []
        c = start
        while c is not None and state.get(c) is None:
            state[c] = 1
            path.append(c)
            c = g.out.get(c)
        if c is not None and state[c] == 1:
            for cell in path:
                state[cell] = 2
            return path[path.index(c):]
        for cell in path:
            state[cell] = 2
    return None


def placement_order(p: Patch) -> list:
    """Cells in a legal build sequence, children before the tiles covering
    their tabs, ties broken lexicographically on (q, r)."""
    g = motif_graph(p)
    cells = tuple(sorted(p.assignment))
    in_deg = {c: 0 for c in cells}
    for t in g.out.values():
        in_deg[t] += 1
    ready = [c for c in cells if in_deg[c] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        c = heapq.heappop(ready)
        order.append(c)
        t = g.out.get(c)
        if t is not None:
            in_deg[t] -= 1
            if in_deg[t] == 0:
                heapq.heappush(ready, t)
    if len(order) < len(cells):
        raise CycleError(find_cycle(g))
    return order


def verify_order(p: Patch, seq: Sequence) -> Optional[OrderViolation]:
    """None if ``seq`` respects every internal dependency, else the first
    violated edge in sequence order."""
    cells = sorted(p.assignment)
    if sorted(seq) != cells or len(seq) != len(cells):
        raise ValueError("sequence is not a permutation of the assigned cells")
    g = motif_graph(p)
    pos = {c: i for i, c in enumerate(seq)}
    best = None
    for child, parent in g.out.items():
        if pos[child] > pos[parent]:
            v = OrderViolation(child, parent, pos[child], pos[parent])
            if best is None or v.child_index < best.child_index:
                best = v
    return best


def order_lines(p: Patch, seq: Sequence) -> list[str]:
    """The tiler's instructions, one line per placement."""
    lines = []
    for i, cell in enumerate(seq, start=1):
        s = p.assignment[cell]
        lines.append(f"step {i}: place tile at ({cell[0]},{cell[1]}) "
                     f"orientation {s.orientation}")
    return lines
