/** JSON shapes of the tiler service, transcribed field for field. */

export type Cell = readonly [number, number];

export interface StateDoc {
  variant: string;
  orientation: number;
  chirality: string;
}

export interface AssignmentEntry extends StateDoc {
  q: number;
  r: number;
}

export type RegionDoc =
  | { kind: "hex"; radius: number }
  | { kind: "cells"; cells: number[][] };

export interface PatchDoc {
  ruleset: { name: string; hash: string };
  region: RegionDoc;
  assignment: AssignmentEntry[];
}

export interface SessionInfo {
  id: string;
  ruleset: string;
  revision: number;
  undo_depth: number;
  created: string;
  modified: string;
}

export interface Snapshot {
  session: SessionInfo;
  patch: PatchDoc;
}

export interface Violation {
  clause: string;
  cells: number[][];
  [extra: string]: unknown;
}

export interface ErrorBody {
  error: string;
  violations?: Violation[];
}

export interface LegalResponse {
  cell: number[];
  states: StateDoc[];
}

export interface HintResponse {
  cells: number[][];
}

export interface RulesetDoc {
  name: string;
  variants: string[];
  chiralities: string[];
  [table: string]: unknown;
}
