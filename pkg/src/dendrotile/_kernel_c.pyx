# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search backend.

A line-for-line transliteration of _kernel_py; the two must stay
operation-identical so results and statistics agree bit for bit.
"""

import numpy as np

cimport cython
from libc.stdint cimport int32_t, int64_t, uint8_t, uint64_t

cdef extern from *:
    """
    #define POPCNT64(x) __builtin_popcountll(x)
    #define CTZ64(x)    __builtin_ctzll(x)
    """
    int POPCNT64(unsigned long long) nogil
    int CTZ64(unsigned long long) nogil

OUTCOME_SAT = "SAT"
OUTCOME_UNSAT = "UNSAT"
OUTCOME_LIMIT = "LIMIT"


def run(nbr, unary, inst_x, inst_y, inst_rel, rel_row, rel_col, male_abs,
        orders, node_limit, mode):
    """Search the compiled problem.  mode 0: first solution; 1: count all."""
    cdef const int32_t[:, ::1] nbr_v = np.ascontiguousarray(nbr, dtype=np.int32)
    cdef const uint64_t[::1] unary_v = np.ascontiguousarray(unary, dtype=np.uint64)
    cdef const int32_t[::1] xs = np.ascontiguousarray(inst_x, dtype=np.int32)
    cdef const int32_t[::1] ys = np.ascontiguousarray(inst_y, dtype=np.int32)
    cdef const int32_t[::1] rels = np.ascontiguousarray(inst_rel, dtype=np.int32)
    cdef const uint64_t[:, ::1] row_v = np.ascontiguousarray(rel_row, dtype=np.uint64)
    cdef const uint64_t[:, ::1] col_v = np.ascontiguousarray(rel_col, dtype=np.uint64)
    cdef const int32_t[::1] male = np.ascontiguousarray(male_abs, dtype=np.int32)
    cdef const int32_t[:, ::1] orders_v = np.ascontiguousarray(orders, dtype=np.int32)

    cdef Py_ssize_t n = unary_v.shape[0]
    cdef Py_ssize_t n_states = row_v.shape[1]
    cdef Py_ssize_t n_inst = xs.shape[0]
    cdef int64_t limit = node_limit
    cdef int count_mode = mode

    cdef int64_t nodes = 0, elims = 0, solutions = 0
    cdef Py_ssize_t i, t, c

    for i in range(n):
        if unary_v[i] == 0:
            return {"outcome": OUTCOME_UNSAT, "assignment": None,
                    "nodes": 0, "eliminations": 0, "solutions": 0}
    if n == 0:
        return {"outcome": OUTCOME_SAT, "assignment": [],
                "nodes": 0, "eliminations": 0, "solutions": 1}

    # arcs per cell, CSR layout, in (2t, 2t+1) emission order
    arc_start_a = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] arc_start = arc_start_a
    for t in range(n_inst):
        arc_start[xs[t] + 1] += 1
        arc_start[ys[t] + 1] += 1
    for i in range(n):
        arc_start[i + 1] += arc_start[i]
    arc_list_a = np.empty(2 * n_inst, dtype=np.int64)
    cdef int64_t[::1] arc_list = arc_list_a
    fill_a = np.asarray(arc_start_a[:n].copy())
    cdef int64_t[::1] fill = fill_a
    for t in range(n_inst):
        arc_list[fill[xs[t]]] = 2 * t
        fill[xs[t]] += 1
        arc_list[fill[ys[t]]] = 2 * t + 1
        fill[ys[t]] += 1

    cdef Py_ssize_t cap = 2 * n_inst if n_inst > 0 else 1
    queue_a = np.zeros(cap, dtype=np.int64)
    cdef int64_t[::1] queue = queue_a
    queued_a = np.zeros(2 * n_inst if n_inst > 0 else 1, dtype=np.uint8)
    cdef uint8_t[::1] queued = queued_a
    cdef Py_ssize_t qhead = 0, qtail = 0, qlen = 0

    dom_a = np.array(unary, dtype=np.uint64, copy=True)
    cdef uint64_t[::1] dom = dom_a
    state_a = np.full(n, -1, dtype=np.int32)
    cdef int32_t[::1] state = state_a

    cdef Py_ssize_t trail_cap = n * n_states + n + 16
    trail_cell_a = np.zeros(trail_cap, dtype=np.int32)
    trail_mask_a = np.zeros(trail_cap, dtype=np.uint64)
    cdef int32_t[::1] trail_cell = trail_cell_a
    cdef uint64_t[::1] trail_mask = trail_mask_a
    cdef Py_ssize_t trail_len = 0

    frame_cell_a = np.zeros(n + 1, dtype=np.int32)
    frame_pos_a = np.zeros(n + 1, dtype=np.int32)
    frame_mark_a = np.zeros(n + 1, dtype=np.int64)
    cdef int32_t[::1] frame_cell = frame_cell_a
    cdef int32_t[::1] frame_pos = frame_pos_a
    cdef int64_t[::1] frame_mark = frame_mark_a
    cdef Py_ssize_t n_frames = 0

    cdef Py_ssize_t arc, src, tgt, a2, k
    cdef Py_ssize_t cell, pos, best
    cdef Py_ssize_t mark
    cdef int rel, side, contradiction, advanced, ok
    cdef int s, sx, e, ex, best_pc, pc
    cdef Py_ssize_t x, steps
    cdef uint64_t m, b, sup, old, new, d
    cdef Py_ssize_t n_assigned = 0

    # initial propagation: every arc once, in index order
    for t in range(2 * n_inst):
        queued[t] = 1
        queue[t] = t
    qhead = 0
    qtail = (2 * n_inst) % cap
    qlen = 2 * n_inst

    contradiction = 0
    while qlen > 0:
        arc = queue[qhead]
        qhead = (qhead + 1) % cap
        qlen -= 1
        queued[arc] = 0
        t = arc >> 1
        rel = rels[t]
        if arc & 1:
            src = ys[t]
            tgt = xs[t]
        else:
            src = xs[t]
            tgt = ys[t]
        sup = 0
        m = dom[src]
        while m != 0:
            b = m & (~m + 1)
            if arc & 1:
                sup |= col_v[rel, CTZ64(b)]
            else:
                sup |= row_v[rel, CTZ64(b)]
            m ^= b
        old = dom[tgt]
        new = old & sup
        if new != old:
            elims += POPCNT64(old & ~new)
            trail_cell[trail_len] = <int32_t> tgt
            trail_mask[trail_len] = old
            trail_len += 1
            dom[tgt] = new
            if new == 0:
                while qlen > 0:
                    arc = queue[qhead]
                    qhead = (qhead + 1) % cap
                    qlen -= 1
                    queued[arc] = 0
                qhead = 0
                qtail = 0
                contradiction = 1
                break
            for k in range(arc_start[tgt], arc_start[tgt + 1]):
                a2 = arc_list[k]
                if queued[a2] == 0:
                    queued[a2] = 1
                    queue[qtail] = a2
                    qtail = (qtail + 1) % cap
                    qlen += 1
    if contradiction:
        return {"outcome": OUTCOME_UNSAT, "assignment": None,
                "nodes": 0, "eliminations": elims, "solutions": 0}

    # select the first cell: min domain size, then min index
    best = -1
    best_pc = 1 << 30
    for c in range(n):
        if state[c] < 0:
            pc = POPCNT64(dom[c])
            if pc < best_pc:
                best = c
                best_pc = pc
                if pc == 1:
                    break
    cell = best
    pos = 0

    while True:
        advanced = 0
        while pos < n_states:
            s = orders_v[cell, pos]
            pos += 1
            if not (dom[cell] >> s) & 1:
                continue
            # male-joint chain walk: would this placement close a cycle?
            e = male[s]
            ok = 1
            if e >= 0:
                x = nbr_v[cell, e]
                if x >= 0:
                    steps = 0
                    while True:
                        if x == cell:
                            ok = 0
                            break
                        sx = state[x]
                        if sx < 0:
                            break
                        ex = male[sx]
                        if ex < 0:
                            break
                        x = nbr_v[x, ex]
                        if x < 0:
                            break
                        steps += 1
                        if steps > n:
                            ok = 0
                            break
            if not ok:
                continue
            nodes += 1
            if nodes > limit:
                return {"outcome": OUTCOME_LIMIT, "assignment": None,
                        "nodes": nodes, "eliminations": elims,
                        "solutions": solutions}
            mark = trail_len
            trail_cell[trail_len] = <int32_t> cell
            trail_mask[trail_len] = dom[cell]
            trail_len += 1
            dom[cell] = (<uint64_t> 1) << s
            state[cell] = s
            n_assigned += 1
            # enqueue this cell's arcs, then run to fixpoint
            for k in range(arc_start[cell], arc_start[cell + 1]):
                a2 = arc_list[k]
                if queued[a2] == 0:
                    queued[a2] = 1
                    queue[qtail] = a2
                    qtail = (qtail + 1) % cap
                    qlen += 1
            contradiction = 0
            while qlen > 0:
                arc = queue[qhead]
                qhead = (qhead + 1) % cap
                qlen -= 1
                queued[arc] = 0
                t = arc >> 1
                rel = rels[t]
                if arc & 1:
                    src = ys[t]
                    tgt = xs[t]
                else:
                    src = xs[t]
                    tgt = ys[t]
                sup = 0
                m = dom[src]
                while m != 0:
                    b = m & (~m + 1)
                    if arc & 1:
                        sup |= col_v[rel, CTZ64(b)]
                    else:
                        sup |= row_v[rel, CTZ64(b)]
                    m ^= b
                old = dom[tgt]
                new = old & sup
                if new != old:
                    elims += POPCNT64(old & ~new)
                    trail_cell[trail_len] = <int32_t> tgt
                    trail_mask[trail_len] = old
                    trail_len += 1
                    dom[tgt] = new
                    if new == 0:
                        while qlen > 0:
                            arc = queue[qhead]
                            qhead = (qhead + 1) % cap
                            qlen -= 1
                            queued[arc] = 0
                        qhead = 0
                        qtail = 0
                        contradiction = 1
                        break
                    for k in range(arc_start[tgt], arc_start[tgt + 1]):
                        a2 = arc_list[k]
                        if queued[a2] == 0:
                            queued[a2] = 1
                            queue[qtail] = a2
                            qtail = (qtail + 1) % cap
                            qlen += 1
            if not contradiction:
                if n_assigned == n:
                    if count_mode == 0:
                        assignment = [int(state[i]) for i in range(n)]
                        return {"outcome": OUTCOME_SAT,
                                "assignment": assignment,
                                "nodes": nodes, "eliminations": elims,
                                "solutions": 1}
                    solutions += 1
                    while trail_len > mark:
                        trail_len -= 1
                        dom[trail_cell[trail_len]] = trail_mask[trail_len]
                    state[cell] = -1
                    n_assigned -= 1
                    continue
                frame_cell[n_frames] = <int32_t> cell
                frame_pos[n_frames] = <int32_t> pos
                frame_mark[n_frames] = mark
                n_frames += 1
                best = -1
                best_pc = 1 << 30
                for c in range(n):
                    if state[c] < 0:
                        pc = POPCNT64(dom[c])
                        if pc < best_pc:
                            best = c
                            best_pc = pc
                            if pc == 1:
                                break
                cell = best
                pos = 0
                advanced = 1
                break
            while trail_len > mark:
                trail_len -= 1
                dom[trail_cell[trail_len]] = trail_mask[trail_len]
            state[cell] = -1
            n_assigned -= 1
        if advanced:
            continue
        if n_frames == 0:
            if count_mode == 1:
                outcome = OUTCOME_SAT if solutions > 0 else OUTCOME_UNSAT
                return {"outcome": outcome, "assignment": None,
                        "nodes": nodes, "eliminations": elims,
                        "solutions": solutions}
            return {"outcome": OUTCOME_UNSAT, "assignment": None,
                    "nodes": nodes, "eliminations": elims, "solutions": 0}
        n_frames -= 1
        cell = frame_cell[n_frames]
        pos = frame_pos[n_frames]
        mark = frame_mark[n_frames]
        while trail_len > mark:
            trail_len -= 1
            dom[trail_cell[trail_len]] = trail_mask[trail_len]
        state[cell] = -1
        n_assigned -= 1
