/** Pure view-state for one tiler session.
 *
 * Every transition returns a fresh state object; the server snapshot inside
 * is the single source of truth for what is placed.  A failed placement is
 * rolled back by re-adopting the last known-good snapshot, so the board can
 * render optimistically and still never drift from the service. */

import { cellKey } from "./geometry.js";
import type { Cell, Snapshot, StateDoc, Violation } from "./types.js";

export interface BoardViewState {
  snapshot: Snapshot;
  /** cellKey -> placed state, derived from snapshot.patch.assignment */
  assignment: Map<string, StateDoc>;
  selected: Cell | null;
  /** placeable states for the selected cell, server order */
  legal: StateDoc[];
  /** index into legal */
  choice: number;
  hintOn: boolean;
  hintCells: Cell[];
  /** violations from the most recent rejected placement */
  violations: Violation[];
  message: string | null;
}

function buildAssignment(snapshot: Snapshot): Map<string, StateDoc> {
  const map = new Map<string, StateDoc>();
  for (const ent of snapshot.patch.assignment) {
    map.set(cellKey([ent.q, ent.r]), {
      variant: ent.variant,
      orientation: ent.orientation,
      chirality: ent.chirality,
    });
  }
  return map;
}

export function newBoardState(snapshot: Snapshot): BoardViewState {
  return {
    snapshot,
    assignment: buildAssignment(snapshot),
    selected: null,
    legal: [],
    choice: 0,
    hintOn: false,
    hintCells: [],
    violations: [],
    message: null,
  };
}

/** True when the incoming snapshot is older news about the same session. */
export function isStale(state: BoardViewState, snapshot: Snapshot): boolean {
  return (
    snapshot.session.id === state.snapshot.session.id &&
    snapshot.session.revision < state.snapshot.session.revision
  );
}

/** Adopt a fresh server snapshot; stale ones are ignored. */
export function applySnapshot(
  state: BoardViewState,
  snapshot: Snapshot,
): BoardViewState {
  if (isStale(state, snapshot)) {
    return state;
  }
  return {
    ...state,
    snapshot,
    assignment: buildAssignment(snapshot),
  };
}

export function selectCell(
  state: BoardViewState,
  cell: Cell,
  legal: StateDoc[],
): BoardViewState {
  return {
    ...state,
    selected: cell,
    legal,
    choice: 0,
    violations: [],
    message: legal.length === 0 ? "no state fits this cell" : null,
  };
}

export function clearSelection(state: BoardViewState): BoardViewState {
  return { ...state, selected: null, legal: [], choice: 0, message: null };
}

export function cycleChoice(
  state: BoardViewState,
  delta: number,
): BoardViewState {
  if (state.legal.length === 0) {
    return state;
  }
  const n = state.legal.length;
  const choice = (((state.choice + delta) % n) + n) % n;
  return { ...state, choice };
}

export function currentChoice(state: BoardViewState): StateDoc | null {
  return state.legal[state.choice] ?? null;
}

/** A placement the server committed: adopt its snapshot, drop selection. */
export function applyPlace(
  state: BoardViewState,
  snapshot: Snapshot,
): BoardViewState {
  return {
    ...applySnapshot(state, snapshot),
    selected: null,
    legal: [],
    choice: 0,
    violations: [],
    message: null,
  };
}

/** A placement the server refused: restore the known-good snapshot and
 * surface the violations; the selection stays so the user can retry. */
export function rollbackPlace(
  state: BoardViewState,
  knownGood: Snapshot,
  violations: Violation[],
  message: string,
): BoardViewState {
  return {
    ...state,
    snapshot: knownGood,
    assignment: buildAssignment(knownGood),
    violations,
    message,
  };
}

export function setHints(
  state: BoardViewState,
  cells: Cell[],
): BoardViewState {
  return { ...state, hintOn: true, hintCells: cells };
}

export function clearHints(state: BoardViewState): BoardViewState {
  return { ...state, hintOn: false, hintCells: [] };
}

export function placedState(
  state: BoardViewState,
  cell: Cell,
): StateDoc | null {
  return state.assignment.get(cellKey(cell)) ?? null;
}

export function isHinted(state: BoardViewState, cell: Cell): boolean {
  return state.hintCells.some((c) => c[0] === cell[0] && c[1] === cell[1]);
}

export function stateLabel(s: StateDoc): string {
  return `${s.variant} o${s.orientation} ${s.chirality}`;
}
