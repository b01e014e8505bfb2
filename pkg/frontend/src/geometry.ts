/** Axial-coordinate plane math, kept numerically identical to the server's
 * SVG renderer so client overlays line up with served images: centers at
 * x = size*(q + r/2), y = size*(r*sqrt(3)/2), pointy-top hexagons of
 * circumradius size/sqrt(3), all coordinates printed to three decimals. */

import type { Cell } from "./types.js";

export const DIRS: readonly Cell[] = [
  [1, 0], [0, 1], [-1, 1], [-1, 0], [0, -1], [1, -1],
];

const SQRT3 = Math.sqrt(3);

export function cellKey(cell: Cell): string {
  return `${cell[0]},${cell[1]}`;
}

export function neighbor(cell: Cell, e: number): Cell {
  const d = DIRS[((e % 6) + 6) % 6]!;
  return [cell[0] + d[0], cell[1] + d[1]];
}

export function fmt(v: number): string {
  const s = v.toFixed(3);
  return s === "-0.000" ? "0.000" : s;
}

export function center(cell: Cell, size: number): [number, number] {
  const [q, r] = cell;
  return [size * (q + r / 2), size * (r * SQRT3) / 2];
}

export function corner(cell: Cell, k: number, size: number): [number, number] {
  const [cx, cy] = center(cell, size);
  const ang = (Math.PI / 180) * (60 * k + 30);
  const rad = size / SQRT3;
  return [cx + rad * Math.cos(ang), cy + rad * Math.sin(ang)];
}

export function edgeMid(cell: Cell, e: number, size: number): [number, number] {
  const [cx, cy] = center(cell, size);
  const [mx, my] = center(neighbor(cell, e), size);
  return [(cx + mx) / 2, (cy + my) / 2];
}

/** The exact `d` attribute the server emits for this cell's outline. */
export function hexPath(cell: Cell, size: number): string {
  const pts = [];
  for (let k = 0; k < 6; k++) {
    const [x, y] = corner(cell, k, size);
    pts.push(`${fmt(x)} ${fmt(y)}`);
  }
  return "M " + pts.join(" L ") + " Z";
}

export function hexDistance(a: Cell, b: Cell): number {
  const dq = a[0] - b[0];
  const dr = a[1] - b[1];
  return (Math.abs(dq) + Math.abs(dr) + Math.abs(dq + dr)) / 2;
}

/** All cells within the given radius, sorted lexicographically on (q, r)
 * like the server's region listings. */
export function hexBall(radius: number): Cell[] {
  const cells: Cell[] = [];
  for (let q = -radius; q <= radius; q++) {
    for (let r = -radius; r <= radius; r++) {
      if (Math.max(Math.abs(q), Math.abs(r), Math.abs(q + r)) <= radius) {
        cells.push([q, r]);
      }
    }
  }
  return cells;
}
