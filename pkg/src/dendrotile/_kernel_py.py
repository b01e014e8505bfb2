"""Pure-Python search backend.

Iterative backtracking over bitmask domains with arc-consistency maintained
after every assignment, plus the male-joint cycle test at assignment time.
The compiled backend mirrors this file operation for operation; any change
here must be replicated there to keep results and statistics bit-identical.
"""

from __future__ import annotations

OUTCOME_SAT = "SAT"
OUTCOME_UNSAT = "UNSAT"
OUTCOME_LIMIT = "LIMIT"


def run(nbr, unary, inst_x, inst_y, inst_rel, rel_row, rel_col, male_abs,
        orders, node_limit, mode):
    """Search the compiled problem.  mode 0: first solution; 1: count all."""
    n = len(unary)
    n_states = rel_row.shape[1]
    nbr_l = [[int(v) for v in row] for row in nbr]
    dom = [int(v) for v in unary]
    row_l = [[int(v) for v in r] for r in rel_row]
    col_l = [[int(v) for v in r] for r in rel_col]
    male = [int(v) for v in male_abs]
    order_l = [[int(v) for v in row] for row in orders]
    xs = [int(v) for v in inst_x]
    ys = [int(v) for v in inst_y]
    rels = [int(v) for v in inst_rel]
    n_inst = len(xs)

    arcs_of = [[] for _ in range(n)]
    for t in range(n_inst):
        arcs_of[xs[t]].append(2 * t)
        arcs_of[ys[t]].append(2 * t + 1)

    # FIFO arc queue as a ring buffer with membership flags
    cap = max(2 * n_inst, 1)
    queue = [0] * cap
    queued = bytearray(2 * n_inst)
    qhead = qtail = qlen = 0

    state = [-1] * n
    trail_cell = []
    trail_mask = []
    nodes = 0
    elims = 0
    solutions = 0

    def clear_queue():
        nonlocal qhead, qtail, qlen
        while qlen:
            arc = queue[qhead]
            qhead = (qhead + 1) % cap
            qlen -= 1
            queued[arc] = 0
        qhead = qtail = 0

    def run_queue():
        """Process queued arcs to fixpoint.  False on a wiped domain."""
        nonlocal qhead, qtail, qlen, elims
        while qlen:
            arc = queue[qhead]
            qhead = (qhead + 1) % cap
            qlen -= 1
            queued[arc] = 0
            t = arc >> 1
            if arc & 1:
                src, tgt = ys[t], xs[t]
                table = col_l[rels[t]]
            else:
                src, tgt = xs[t], ys[t]
                table = row_l[rels[t]]
            sup = 0
            m = dom[src]
            while m:
                b = m & -m
                sup |= table[b.bit_length() - 1]
                m ^= b
            old = dom[tgt]
            new = old & sup
            if new != old:
                elims += (old & ~new).bit_count()
                trail_cell.append(tgt)
                trail_mask.append(old)
                dom[tgt] = new
                if new == 0:
                    clear_queue()
                    return False
                qt = qtail
                for a in arcs_of[tgt]:
                    if not queued[a]:
                        queued[a] = 1
                        queue[qt] = a
                        qt = (qt + 1) % cap
                        qlen += 1
                qtail = qt
        return True

    def enqueue_cell(c):
        nonlocal qtail, qlen
        for a in arcs_of[c]:
            if not queued[a]:
                queued[a] = 1
                queue[qtail] = a
                qtail = (qtail + 1) % cap
                qlen += 1

    def undo(mark):
        while len(trail_cell) > mark:
            dom[trail_cell.pop()] = trail_mask.pop()

    def male_ok(cell, s):
        e = male[s]
        if e < 0:
            return True
        x = nbr_l[cell][e]
        if x < 0:
            return True
        # x == cell (torus self-edge) must be caught before the state test
        steps = 0
        while True:
            if x == cell:
                return False
            sx = state[x]
            if sx < 0:
                return True
            ex = male[sx]
            if ex < 0:
                return True
            x = nbr_l[x][ex]
            if x < 0:
                return True
            steps += 1
            if steps > n:
                return False

    for c in range(n):
        if dom[c] == 0:
            return {"outcome": OUTCOME_UNSAT, "assignment": None,
                    "nodes": 0, "eliminations": 0, "solutions": 0}

    for t in range(2 * n_inst):
        queued[t] = 1
        queue[t] = t
    qhead, qtail, qlen = 0, (2 * n_inst) % cap, 2 * n_inst
    if not run_queue():
        return {"outcome": OUTCOME_UNSAT, "assignment": None,
                "nodes": 0, "eliminations": elims, "solutions": 0}

    n_assigned = 0
    frames = []  # (cell, next value position, trail mark)

    def select():
        best = -1
        best_pc = 1 << 30
        for c in range(n):
            if state[c] < 0:
                pc = dom[c].bit_count()
                if pc < best_pc:
                    best, best_pc = c, pc
                    if pc == 1:
                        break
        return best

    if n == 0:
        sat = {"outcome": OUTCOME_SAT, "assignment": [],
               "nodes": 0, "eliminations": elims, "solutions": 1}
        return sat

    cell = select()
    pos = 0
    while True:
        advanced = False
        d = dom[cell]
        row = order_l[cell]
        while pos < n_states:
            s = row[pos]
            pos += 1
            if not (d >> s) & 1:
                continue
            if not male_ok(cell, s):
                continue
            nodes += 1
            if nodes > node_limit:
                return {"outcome": OUTCOME_LIMIT, "assignment": None,
                        "nodes": nodes, "eliminations": elims,
                        "solutions": solutions}
            mark = len(trail_cell)
            trail_cell.append(cell)
            trail_mask.append(dom[cell])
            dom[cell] = 1 << s
            state[cell] = s
            n_assigned += 1
            enqueue_cell(cell)
            if run_queue():
                if n_assigned == n:
                    if mode == 0:
                        return {"outcome": OUTCOME_SAT,
                                "assignment": list(state),
                                "nodes": nodes, "eliminations": elims,
                                "solutions": 1}
                    solutions += 1
                    undo(mark)
                    state[cell] = -1
                    n_assigned -= 1
                    d = dom[cell]
                    continue
                frames.append((cell, pos, mark))
                cell = select()
                pos = 0
                advanced = True
                break
            undo(mark)
            state[cell] = -1
            n_assigned -= 1
            d = dom[cell]
        if advanced:
            continue
        if not frames:
            if mode == 1:
                return {"outcome": OUTCOME_SAT if solutions else OUTCOME_UNSAT,
                        "assignment": None, "nodes": nodes,
                        "eliminations": elims, "solutions": solutions}
            return {"outcome": OUTCOME_UNSAT, "assignment": None,
                    "nodes": nodes, "eliminations": elims, "solutions": 0}
        cell, pos, mark = frames.pop()
        undo(mark)
        state[cell] = -1
        n_assigned -= 1
