"""Search-kernel plumbing: problem compilation and backend selection.

The solver compiles a (rule set, cell set, adjacency) triple into flat integer
arrays, then hands them to a search backend.  Two backends exist with
identical semantics: a compiled one (dendrotile._kernel_c, built from the
Cython source at install time) and a pure-Python fallback.  Both must produce
bit-identical results and statistics for the same inputs; the test suite and
benchmarks/bench_kernels.py hold them to that.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

import numpy as np

from .hexgrid import Cell
from .ruleset import RuleSet, TileState

from . import _kernel_py

try:
    from . import _kernel_c
except ImportError:
    _kernel_c = None

MASK64 = (1 << 64) - 1


def available_backends() -> list[str]:
    return ["py"] + (["c"] if _kernel_c is not None else [])


def resolve_backend(name: str):
    if name == "auto":
        return _kernel_c if _kernel_c is not None else _kernel_py
    if name == "py":
        return _kernel_py
    if name == "c":
        if _kernel_c is None:
            raise RuntimeError("compiled kernel is not available")
        return _kernel_c
    raise ValueError(f"unknown backend {name!r}")


class CompiledProblem:
    """Flat-array constraint network over an indexed cell set.

    Instances are binary: (x, y, rel) where rel 0..2 is a K1 relation across
    pivot edge rel, and rel 3..5 is a K3 relation for pivot edge rel-3 (x is
    the plus-side cell).  Self instances are folded into per-cell unary masks,
    which is equivalent for complete assignments.
    """

    def __init__(self, cells: Sequence[Cell], states: Sequence[TileState],
                 nbr: np.ndarray, unary: np.ndarray,
                 inst_x: np.ndarray, inst_y: np.ndarray, inst_rel: np.ndarray,
                 rel_row: np.ndarray, rel_col: np.ndarray,
                 male_abs: np.ndarray):
        self.cells = list(cells)
        self.states = list(states)
        self.nbr = nbr            # int32 [n_cells, 6], -1 where absent
        self.unary = unary        # uint64 [n_cells]
        self.inst_x = inst_x      # int32 [n_inst]
        self.inst_y = inst_y      # int32 [n_inst]
        self.inst_rel = inst_rel  # int32 [n_inst]
        self.rel_row = rel_row    # uint64 [6, n_states]: partners for x-side state
        self.rel_col = rel_col    # uint64 [6, n_states]: partners for y-side state
        self.male_abs = male_abs  # int32 [n_states], -1 when no joint

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def n_states(self) -> int:
        return len(self.states)


def compile_problem(rs: RuleSet, cells: Sequence[Cell],
                    nbr_of: Callable[[Cell, int], Optional[Cell]]) -> CompiledProblem:
    """Build the constraint network for `cells` under adjacency `nbr_of`.

    `nbr_of` returns the neighboring cell in the same indexed set (a torus
    reduction or a region membership filter), or None when absent.  Cells must
    already be in their canonical order; indices follow it.
    """
    cells = list(cells)
    states = rs.enumerate_states()
    n, s = len(cells), len(states)
    if s > 63:
        raise ValueError("kernel supports at most 63 states")
    index = {c: i for i, c in enumerate(cells)}

    nbr = np.full((n, 6), -1, dtype=np.int32)
    for i, c in enumerate(cells):
        for e in range(6):
            t = nbr_of(c, e)
            if t is not None:
                nbr[i, e] = index[t]

    # relation masks: rel 0..2 = K1 at pivot edge e, rel 3..5 = K3 at edge e-3
    rel_row = np.zeros((6, s), dtype=np.uint64)
    rel_col = np.zeros((6, s), dtype=np.uint64)
    for e in range(3):
        for ia, sa in enumerate(states):
            la = rs.edge_label(sa, e)
            row = 0
            for ib, sb in enumerate(states):
                if rs.k1_ok(la, rs.edge_label(sb, (e + 3) % 6)):
                    row |= 1 << ib
            rel_row[e, ia] = row
        for ib in range(s):
            col = 0
            for ia in range(s):
                if rel_row[e, ia] >> ib & 1:
                    col |= 1 << ia
            rel_col[e, ib] = col

    has_k3 = rs.k3_compat is not None and rs.base_corner_labels is not None
    if has_k3:
        for e in range(3):
            for ip, sp in enumerate(states):
                lp = rs.corner_label(sp, (e + 4) % 6)
                row = 0
                for im, sm in enumerate(states):
                    if rs.k3_ok(lp, rs.corner_label(sm, (e + 1) % 6)):
                        row |= 1 << im
                rel_row[3 + e, ip] = row
            for im in range(s):
                col = 0
                for ip in range(s):
                    if rel_row[3 + e, ip] >> im & 1:
                        col |= 1 << ip
                rel_col[3 + e, im] = col

    full = (1 << s) - 1
    unary = np.full(n, full, dtype=np.uint64)
    xs, ys, rels = [], [], []

    def diag(rel: int) -> int:
        m = 0
        for i in range(s):
            if rel_row[rel, i] >> i & 1:
                m |= 1 << i
        return m

    for i in range(n):
        for e in range(3):
            j = int(nbr[i, e])
            if j < 0:
                continue
            if j == i:
                unary[i] &= np.uint64(diag(e))
            else:
                xs.append(i); ys.append(j); rels.append(e)
        if has_k3:
            for e in range(3):
                cp = int(nbr[i, (e + 1) % 6])
                cm = int(nbr[i, (e + 5) % 6])
                if cp < 0 or cm < 0:
                    continue
                if cp == cm:
                    unary[cp] &= np.uint64(diag(3 + e))
                else:
                    xs.append(cp); ys.append(cm); rels.append(3 + e)

    male = np.full(len(states), -1, dtype=np.int32)
    for k, st in enumerate(states):
        m = rs.male_edge_abs(st)
        male[k] = -1 if m is None else m

    return CompiledProblem(
        cells, states, nbr, unary,
        np.asarray(xs, dtype=np.int32), np.asarray(ys, dtype=np.int32),
        np.asarray(rels, dtype=np.int32), rel_row, rel_col, male)


def splitmix64(x: int) -> tuple[int, int]:
    """One step of the shared PRNG; returns (new_state, output)."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return x, z ^ (z >> 31)


def value_orders(n_cells: int, n_states: int, seed: int) -> np.ndarray:
    """Per-cell state orderings: a seeded Fisher-Yates shuffle per cell."""
    orders = np.empty((n_cells, n_states), dtype=np.int32)
    for c in range(n_cells):
        perm = list(range(n_states))
        st = (seed & MASK64) ^ ((0xD1B54A32D192ED03 * (c + 1)) & MASK64)
        for i in range(n_states - 1, 0, -1):
            st, out = splitmix64(st)
            j = out % (i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        orders[c] = perm
    return orders
