"""Independent oracles used by the test suite and the derivation scripts.

Nothing here imports the solver's search kernels; these are the slow, obvious
implementations the fast code is checked against.

The main one is the nested-triangle construction: a deterministic hierarchy
that assigns every cell of the plane a stripe orientation such that the chord
decorations (one diameter plus two corner cuts per tile) join into nested
triangles of unboundedly many scales.  It gives arbitrarily large valid
assignments for stripe-marked rule sets and is the generator the shipped
tables were derived from.

Hierarchy: sublattices L_n = 2^n Z^2 + a_n with anchors a_0 = (0,0),
a_{n+1} = a_n + 2^n * delta_n, delta_n odd (so no cell has infinite level).
level(c) = max n with c in L_n.  A level-n cell is the midpoint of two
L_{n+1} points along exactly one of the three lattice axes; its tile diameter
runs along that axis.  The two flanking points start an escalation that
decides on which side of the diameter line the enclosing triangle lies, which
fixes the tile's orientation among the six.
"""

from __future__ import annotations

from functools import lru_cache

DIRS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))

# axis of a level-n cell from (cell - a_{n+1}) / 2^n mod 2
_AXIS_OF_COSET = {(1, 0): 0, (0, 1): 1, (1, 1): 2}

# base stripe labels for orientation 0 (axis 0, triangle on the left):
# P = crossing displaced toward corner e, M = toward corner e-1
STRIPE_BASE_R = ("P", "P", "M", "M", "P", "M")
STRIPE_BASE_F = ("M", "P", "M", "P", "P", "M")  # mirror of R; equals rot-3 of R


def default_deltas(n: int) -> tuple[int, int]:
    """Anchor steps cycling (1,0), (0,1), (1,1).

    The 2-adic limit of the anchors is (-5/7, -6/7); its q, r, and q+r
    coordinates are all non-integers, so no lattice line along any of the
    three axes passes through the limit and every escalation terminates.
    A sequence without that property (the alternating (1,0)/(0,1) one, say,
    whose limit is (-1/3, -2/3) with integral q+r) leaves a fault line of
    cells whose enclosing triangle never closes.
    """
    return ((1, 0), (0, 1), (1, 1))[n % 3]


def alternating_deltas(n: int) -> tuple[int, int]:
    """Anchor steps alternating (1,0), (0,1): faulted along q + r = -1."""
    return (1, 0) if n % 2 == 0 else (0, 1)


class Hierarchy:
    """One concrete nesting of sublattices, fixed by its anchor steps."""

    MAX_SCALE = 96

    def __init__(self, deltas=default_deltas):
        self._deltas = deltas
        self._anchor = lru_cache(maxsize=None)(self._anchor_uncached)

    def _anchor_uncached(self, m: int) -> tuple[int, int]:
        if m == 0:
            return (0, 0)
        aq, ar = self._anchor(m - 1)
        dq, dr = self._deltas(m - 1)
        if (dq % 2, dr % 2) == (0, 0):
            raise ValueError(f"delta {m - 1} is even: hierarchy degenerates")
        return (aq + (dq << (m - 1)), ar + (dr << (m - 1)))

    def _in_level(self, cell: tuple[int, int], m: int) -> bool:
        aq, ar = self._anchor(m)
        return (cell[0] - aq) % (1 << m) == 0 and (cell[1] - ar) % (1 << m) == 0

    def level_axis(self, cell: tuple[int, int]) -> tuple[int, int]:
        n = 0
        while n < self.MAX_SCALE and self._in_level(cell, n + 1):
            n += 1
        if n >= self.MAX_SCALE:
            raise ValueError(f"cell {cell} exceeds scale bound")
        aq, ar = self._anchor(n + 1)
        d = (((cell[0] - aq) >> n) & 1, ((cell[1] - ar) >> n) & 1)
        return n, _AXIS_OF_COSET[d]

    def triangle_side(self, cell: tuple[int, int], n: int, axis: int) -> str:
        """Which side of the cell's diameter line its triangle lies on.

        Escalates through scales: the current segment is a pair of adjacent
        L_m points along the axis; of the four L_m points (the two endpoints
        and the two beside the low endpoint) exactly one belongs to L_{m+1}.
        A sideways hit ends a triangle side and names the side; an endpoint
        hit means the straight run extends to double length at scale m+1.
        """
        d = DIRS[axis]
        aq = cell[0] - (d[0] << n)
        ar = cell[1] - (d[1] << n)
        m = n + 1
        gl = DIRS[(axis + 1) % 6]
        gr = DIRS[(axis - 1) % 6]
        while m < self.MAX_SCALE:
            hit_a = self._in_level((aq, ar), m + 1)
            hit_b = self._in_level((aq + (d[0] << m), ar + (d[1] << m)), m + 1)
            hit_l = self._in_level((aq + (gl[0] << m), ar + (gl[1] << m)), m + 1)
            hit_r = self._in_level((aq + (gr[0] << m), ar + (gr[1] << m)), m + 1)
            if hit_a + hit_b + hit_l + hit_r != 1:
                raise AssertionError("exactly one quad point must escalate")
            if hit_l:
                return "R"  # next-scale point on the left: triangle right
            if hit_r:
                return "L"
            if hit_b:
                # run extends backward: new segment ends at the old head
                aq += d[0] << m
                ar += d[1] << m
                aq -= d[0] << (m + 1)
                ar -= d[1] << (m + 1)
            m += 1
        raise ValueError(f"escalation for {cell} exceeds scale bound")

    def orientation(self, cell: tuple[int, int]) -> int:
        """Stripe orientation 0..5: axis plus 3 when the triangle is right."""
        n, axis = self.level_axis(cell)
        side = self.triangle_side(cell, n, axis)
        return axis if side == "L" else axis + 3

    def stripe_label(self, cell: tuple[int, int], e: int) -> str:
        return STRIPE_BASE_R[(e - self.orientation(cell)) % 6]


def hex_ball(radius: int) -> list[tuple[int, int]]:
    out = []
    for q in range(-radius, radius + 1):
        for r in range(max(-radius, -q - radius), min(radius, -q + radius) + 1):
            out.append((q, r))
    out.sort()
    return out


def stripe_field_consistent(h: Hierarchy, cells) -> list[str]:
    """All K1 stripe conflicts in the constructed field (empty = consistent)."""
    bad = []
    cellset = set(cells)
    for c in cells:
        for e in range(3):
            t = (c[0] + DIRS[e][0], c[1] + DIRS[e][1])
            if t not in cellset:
                continue
            la = h.stripe_label(c, e)
            lb = h.stripe_label(t, (e + 3) % 6)
            if {la, lb} != {"P", "M"}:
                bad.append(f"{c} e{e} {la} / {t} e{(e + 3) % 6} {lb}")
    return bad


# ---------------------------------------------------------------------------
# brute-force enumeration oracles


def brute_force_count(rs, cells, fixed=None) -> int:
    """Count complete valid assignments by depth-first enumeration.

    Independent of the solver: checks clauses directly through the rule-set
    API, one cell at a time in the given order, pruning on first conflict.
    Cells listed in ``fixed`` are pinned to the given state.
    """
    from dendrotile.ruleset import k3_geometry

    cells = list(cells)
    cellset = set(cells)
    states = rs.enumerate_states()
    fixed = fixed or {}
    asg = {}

    def ok(c, s):
        for e in range(6):
            t = (c[0] + DIRS[e][0], c[1] + DIRS[e][1])
            st = asg.get(t)
            if st is not None and not rs.k1_ok(
                    rs.edge_label(s, e), rs.edge_label(st, (e + 3) % 6)):
                return False
        if rs.k3_compat is not None:
            # instances where c is the pivot, the plus flank, or the minus
            # flank; each is checked once its last participant is decided
            for e in range(3):
                for pivot in (c,
                              (c[0] + DIRS[(e + 4) % 6][0], c[1] + DIRS[(e + 4) % 6][1]),
                              (c[0] + DIRS[(e + 2) % 6][0], c[1] + DIRS[(e + 2) % 6][1])):
                    if pivot not in cellset:
                        continue
                    if pivot != c and pivot not in asg:
                        continue
                    g = k3_geometry(pivot, e)
                    if g.c_plus not in cellset or g.c_minus not in cellset:
                        continue
                    sp = s if g.c_plus == c else asg.get(g.c_plus)
                    sm = s if g.c_minus == c else asg.get(g.c_minus)
                    if sp is None or sm is None:
                        continue
                    if not rs.k3_ok(rs.corner_label(sp, g.plus_corner),
                                    rs.corner_label(sm, g.minus_corner)):
                        return False
        e = rs.male_edge_abs(s)
        if e is not None:
            x = (c[0] + DIRS[e][0], c[1] + DIRS[e][1])
            seen = 0
            while True:
                if x == c:
                    return False
                sx = asg.get(x)
                if sx is None:
                    break
                ex = rs.male_edge_abs(sx)
                if ex is None:
                    break
                x = (x[0] + DIRS[ex][0], x[1] + DIRS[ex][1])
                seen += 1
                if seen > len(asg) + 1:
                    break
        return True

    def rec(i):
        if i == len(cells):
            return 1
        c = cells[i]
        total = 0
        choices = (fixed[c],) if c in fixed else states
        for s in choices:
            if ok(c, s):
                asg[c] = s
                total += rec(i + 1)
                del asg[c]
        return total

    return rec(0)


def brute_force_torus_count(rs, basis) -> int:
    """Count valid assignments of a torus quotient's cell classes.

    Constraints are read through basis.reduce, so self-identified edges
    (a neighbor that reduces back to the same class, or to an
    already-visited class twice) are checked against the class's own
    labels.  Independent of the solver's torus compilation.
    """
    from dendrotile.ruleset import k3_geometry

    classes = basis.cells()
    states = rs.enumerate_states()
    asg = {}

    def nbr(c, e):
        return basis.reduce((c[0] + DIRS[e][0], c[1] + DIRS[e][1]))

    def ok(c, s):
        def state_of(x):
            return s if x == c else asg.get(x)

        for e in range(6):
            st = state_of(nbr(c, e))
            if st is not None and not rs.k1_ok(
                    rs.edge_label(s, e), rs.edge_label(st, (e + 3) % 6)):
                return False
        if rs.k3_compat is not None:
            for pivot in classes:
                for e in range(3):
                    g = k3_geometry(pivot, e)
                    plus, minus = nbr(pivot, (e + 1) % 6), nbr(pivot, (e + 5) % 6)
                    if c not in (pivot, plus, minus):
                        continue
                    sp, sm = state_of(plus), state_of(minus)
                    spv = state_of(pivot)
                    if sp is None or sm is None or spv is None:
                        continue
                    if not rs.k3_ok(rs.corner_label(sp, g.plus_corner),
                                    rs.corner_label(sm, g.minus_corner)):
                        return False
        e = rs.male_edge_abs(s)
        if e is not None:
            x = nbr(c, e)
            steps = 0
            while True:
                if x == c:
                    return False
                sx = asg.get(x)
                if sx is None:
                    break
                ex = rs.male_edge_abs(sx)
                if ex is None:
                    break
                x = nbr(x, ex)
                steps += 1
                if steps > len(classes) + 1:
                    break
        return True

    def rec(i):
        if i == len(classes):
            return 1
        c = classes[i]
        total = 0
        for s in states:
            if ok(c, s):
                asg[c] = s
                total += rec(i + 1)
                del asg[c]
        return total

    return rec(0)


def partial_clean(rs, region_cells, asg) -> bool:
    """Whether a partial assignment violates no clause among assigned cells.

    The same reading verify_patch implements, rebuilt from the rule-set API:
    K1 across assigned neighbor pairs, K3 where the pivot and both flanks
    are assigned and every participant is in the region, no male cycle.
    """
    from dendrotile.ruleset import k3_geometry

    region = set(region_cells)
    for c, s in asg.items():
        for e in range(3):
            t = (c[0] + DIRS[e][0], c[1] + DIRS[e][1])
            st = asg.get(t)
            if st is not None and not rs.k1_ok(
                    rs.edge_label(s, e), rs.edge_label(st, (e + 3) % 6)):
                return False
    if rs.k3_compat is not None:
        for c, s in asg.items():
            for e in range(3):
                g = k3_geometry(c, e)
                if g.c_plus not in region or g.c_minus not in region:
                    continue
                sp, sm = asg.get(g.c_plus), asg.get(g.c_minus)
                if sp is None or sm is None:
                    continue
                if not rs.k3_ok(rs.corner_label(sp, g.plus_corner),
                                rs.corner_label(sm, g.minus_corner)):
                    return False
    for c in asg:
        x = c
        steps = 0
        while True:
            e = rs.male_edge_abs(asg[x])
            if e is None:
                break
            x = (x[0] + DIRS[e][0], x[1] + DIRS[e][1])
            if x not in asg:
                break
            if x == c:
                return False
            steps += 1
            if steps > len(asg):
                return False
    return True


def undirected_cycle_exists(n: int, edges) -> bool:
    """Union-find cycle check on an undirected graph with n nodes."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return True
        parent[ra] = rb
    return False
