"""Axial-coordinate math for the hexagonal cell lattice.

Cells are (q, r) integer pairs.  Edge e of a cell is the edge crossed when
stepping to neighbor(cell, e); corner k is the vertex between edges k and
k+1, shared with neighbor(cell, k) and neighbor(cell, (k+1) % 6).
"""

from __future__ import annotations

from typing import Iterable, Iterator

Cell = tuple[int, int]

# dir(0) = (1, 0); each next direction is the previous rotated by 60 degrees
# counterclockwise, where rotate60(q, r) = (-r, q + r).
DIRS: tuple[Cell, ...] = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


def direction(e: int) -> Cell:
    return DIRS[e % 6]


def neighbor(cell: Cell, e: int) -> Cell:
    dq, dr = DIRS[e % 6]
    return (cell[0] + dq, cell[1] + dr)


def opposite(e: int) -> int:
    return (e + 3) % 6


def rotate_cell(cell: Cell, k: int) -> Cell:
    """Rotate a cell about the origin by k sixths of a turn."""
    q, r = cell
    for _ in range(k % 6):
        q, r = -r, q + r
    return (q, r)


def mirror_cell(cell: Cell) -> Cell:
    """Reflect across the axis through edge 0: fixes dir(0), swaps dir(1)/dir(5)."""
    q, r = cell
    return (q + r, -r)


def distance(a: Cell, b: Cell) -> int:
    dq = a[0] - b[0]
    dr = a[1] - b[1]
    return (abs(dq) + abs(dr) + abs(dq + dr)) // 2


def hex_ball(radius: int) -> list[Cell]:
    """All cells within `radius` of the origin, in lexicographic (q, r) order.

    Size is 3*R*R + 3*R + 1.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    out = []
    for q in range(-radius, radius + 1):
        lo = max(-radius, -q - radius)
        hi = min(radius, -q + radius)
        for r in range(lo, hi + 1):
            out.append((q, r))
    return out


# ---------------------------------------------------------------------------
# torus quotients


class TorusBasis:
    """Sublattice basis (u, v) defining a torus quotient of the cell lattice.

    The quotient has exactly |det| cell classes.  Canonical representatives
    come from the Hermite form of the sublattice: u' = (a, 0), v' = (b, d)
    with a, d >= 1 and 0 <= b < a; representatives are (q, r) with
    0 <= q < a, 0 <= r < d.
    """

    __slots__ = ("u", "v", "_a", "_b", "_d")

    def __init__(self, u: Cell, v: Cell):
        det = u[0] * v[1] - u[1] * v[0]
        if det == 0:
            raise ValueError("torus basis vectors must be linearly independent")
        self.u = (int(u[0]), int(u[1]))
        self.v = (int(v[0]), int(v[1]))
        self._a, self._b, self._d = _hermite(self.u, self.v)

    @property
    def det(self) -> int:
        return abs(self.u[0] * self.v[1] - self.u[1] * self.v[0])

    def canonical(self) -> tuple[Cell, Cell]:
        return ((self._a, 0), (self._b, self._d))

    def reduce(self, cell: Cell) -> Cell:
        q, r = cell
        a, b, d = self._a, self._b, self._d
        k = r // d
        q -= k * b
        r -= k * d
        return (q % a, r)

    def cells(self) -> list[Cell]:
        return [(q, r) for q in range(self._a) for r in range(self._d)]

    def __eq__(self, other) -> bool:
        return isinstance(other, TorusBasis) and self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def __repr__(self) -> str:
        return f"TorusBasis(u={self.u}, v={self.v})"


def _hermite(u: Cell, v: Cell) -> tuple[int, int, int]:
    """Hermite form of the lattice spanned by u, v: basis (a, 0), (b, d)."""
    # Euclid on the r components; unimodular ops keep the lattice fixed.
    (uq, ur), (vq, vr) = u, v
    while vr != 0:
        k = ur // vr
        uq, ur = uq - k * vq, ur - k * vr
        (uq, ur), (vq, vr) = (vq, vr), (uq, ur)
    # v is now the r-null generator, u carries the r gcd
    a = abs(vq)
    if ur < 0:
        uq, ur = -uq, -ur
    return a, uq % a, ur


def torus_reduce(cell: Cell, basis: TorusBasis) -> Cell:
    return basis.reduce(cell)


def canonical_bases(max_det: int) -> list[TorusBasis]:
    """All distinct torus quotients with 1 <= det <= max_det.

    Enumerated in (det, a, b) order; one basis per sublattice.
    """
    out = []
    for det in range(1, max_det + 1):
        for a in range(1, det + 1):
            if det % a:
                continue
            d = det // a
            for b in range(a):
                out.append(TorusBasis((a, 0), (b, d)))
    return out


# ---------------------------------------------------------------------------
# regions


class Region:
    """A finite set of cells to solve over: a hex ball or an explicit set."""

    __slots__ = ("kind", "radius", "_cells", "_set")

    def __init__(self, kind: str, radius: int | None = None,
                 cells: Iterable[Cell] | None = None):
        if kind == "hex":
            if radius is None:
                raise ValueError("hex region requires a radius")
            self.kind = "hex"
            self.radius = radius
            self._cells = hex_ball(radius)
        elif kind == "cells":
            if cells is None:
                raise ValueError("explicit region requires cells")
            self.kind = "cells"
            self.radius = None
            self._cells = sorted({(int(q), int(r)) for q, r in cells})
        else:
            raise ValueError(f"unknown region kind: {kind!r}")
        self._set = set(self._cells)

    @classmethod
    def hex(cls, radius: int) -> "Region":
        return cls("hex", radius=radius)

    @classmethod
    def explicit(cls, cells: Iterable[Cell]) -> "Region":
        return cls("cells", cells=cells)

    def cells(self) -> list[Cell]:
        return list(self._cells)

    def __contains__(self, cell: Cell) -> bool:
        if self.kind == "hex":
            q, r = cell
            return max(abs(q), abs(r), abs(q + r)) <= self.radius
        return cell in self._set

    def __len__(self) -> int:
        return len(self._cells)

    def __iter__(self) -> Iterator[Cell]:
        return iter(self._cells)

    def descriptor(self) -> dict:
        if self.kind == "hex":
            return {"kind": "hex", "radius": self.radius}
        return {"kind": "cells", "cells": [list(c) for c in self._cells]}

    @classmethod
    def from_descriptor(cls, doc: dict) -> "Region":
        if doc.get("kind") == "hex":
            return cls.hex(int(doc["radius"]))
        if doc.get("kind") == "cells":
            return cls.explicit([tuple(c) for c in doc["cells"]])
        raise ValueError(f"unknown region descriptor: {doc!r}")


def region_cells(radius: int) -> list[Cell]:
    return hex_ball(radius)
