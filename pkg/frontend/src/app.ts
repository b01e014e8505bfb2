/** DOM wiring: one session, a clickable board, a state picker, and the
 * server's own rendering alongside.  All decisions live in board.ts and
 * client.ts; this file only moves data between them and the page. */

import {
  applyPlace,
  applySnapshot,
  BoardViewState,
  clearHints,
  clearSelection,
  currentChoice,
  cycleChoice,
  isHinted,
  newBoardState,
  placedState,
  rollbackPlace,
  selectCell,
  setHints,
  stateLabel,
} from "./board.js";
import { TilerClient } from "./client.js";
import { cellKey, center, hexBall, hexPath } from "./geometry.js";
import type { Cell, Snapshot } from "./types.js";

const SIZE = 40;
const SVG_NS = "http://www.w3.org/2000/svg";

interface App {
  client: TilerClient;
  state: BoardViewState;
  root: HTMLElement;
}

function boardRadius(snapshot: Snapshot): number {
  const region = snapshot.patch.region;
  return region.kind === "hex" ? region.radius : 0;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) {
    node.setAttribute(k, v);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function drawBoard(app: App): void {
  const { state } = app;
  const radius = boardRadius(state.snapshot);
  const cells = hexBall(radius);
  const span = SIZE * (radius + 1) * 2;

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `${-span / 2} ${-span / 2} ${span} ${span}`);
  svg.setAttribute("width", "520");
  svg.setAttribute("height", "520");

  for (const cell of cells) {
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute("d", hexPath(cell, SIZE));
    path.setAttribute("stroke", "#4a4a4a");
    const placed = placedState(state, cell);
    const isSelected =
      state.selected !== null && cellKey(state.selected) === cellKey(cell);
    path.setAttribute(
      "fill",
      placed ? "#cfe6cf" : isSelected ? "#fde9b8" : "#f7f5ef",
    );
    if (state.hintOn && isHinted(state, cell)) {
      path.setAttribute("stroke", "#c0392b");
      path.setAttribute("stroke-width", "3");
    }
    path.addEventListener("click", () => void onSelect(app, cell));
    svg.appendChild(path);

    if (placed) {
      const [x, y] = center(cell, SIZE);
      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(x));
      label.setAttribute("y", String(y + 4));
      label.setAttribute("text-anchor", "middle");
      label.setAttribute("font-size", "11");
      label.textContent = `o${placed.orientation}${placed.chirality}`;
      svg.appendChild(label);
    }
  }

  const holder = app.root.querySelector("#board")!;
  holder.replaceChildren(svg);
}

function drawSidebar(app: App): void {
  const { state, client } = app;
  const info = app.root.querySelector("#info")!;
  const sess = state.snapshot.session;
  const lines = [
    `session ${sess.id} · rule set ${sess.ruleset}`,
    `revision ${sess.revision} · ${state.assignment.size} tiles · ` +
      `undo depth ${sess.undo_depth}`,
  ];
  if (state.message) {
    lines.push(state.message);
  }
  for (const v of state.violations) {
    lines.push(`violated ${v.clause}: ${v.cells.map((c) => `(${c})`).join(" ")}`);
  }
  info.replaceChildren(
    ...lines.map((line) => el("div", { class: "line" }, line)),
  );

  const picker = app.root.querySelector("#picker")!;
  picker.replaceChildren();
  const choice = currentChoice(state);
  if (state.selected && choice) {
    picker.appendChild(
      el(
        "div",
        {},
        `${stateLabel(choice)} (${state.choice + 1}/${state.legal.length})`,
      ),
    );
    const preview = el("img", {
      src: client.tileSvgUrl(choice, "joints"),
      width: "96",
      height: "96",
      alt: stateLabel(choice),
    });
    picker.appendChild(preview);
  }

  const served = app.root.querySelector("#served") as HTMLImageElement;
  served.src = client.sessionSvgUrl(sess.id, "dendrite", sess.revision);
}

function redraw(app: App): void {
  drawBoard(app);
  drawSidebar(app);
}

async function onSelect(app: App, cell: Cell): Promise<void> {
  const placed = placedState(app.state, cell);
  if (placed) {
    app.state = clearSelection(app.state);
    redraw(app);
    return;
  }
  const legal = await app.client.legal(app.state.snapshot.session.id, cell);
  app.state = selectCell(app.state, cell, legal.states);
  redraw(app);
}

async function onPlace(app: App): Promise<void> {
  const cell = app.state.selected;
  const choice = currentChoice(app.state);
  if (!cell || !choice) {
    return;
  }
  const knownGood = app.state.snapshot;
  const result = await app.client.place(
    knownGood.session.id,
    cell,
    choice,
  );
  app.state = result.ok
    ? applyPlace(app.state, result.snapshot)
    : rollbackPlace(app.state, knownGood, result.violations, result.error);
  redraw(app);
}

async function onUndo(app: App): Promise<void> {
  const result = await app.client.undo(app.state.snapshot.session.id);
  if (result.ok) {
    app.state = applySnapshot(app.state, result.snapshot);
  } else {
    app.state = { ...app.state, message: result.error };
  }
  redraw(app);
}

async function onHint(app: App): Promise<void> {
  if (app.state.hintOn) {
    app.state = clearHints(app.state);
  } else {
    const cells = await app.client.hint(app.state.snapshot.session.id);
    app.state = setHints(app.state, cells as Cell[]);
  }
  redraw(app);
}

export async function start(root: HTMLElement, baseUrl: string): Promise<void> {
  const client = new TilerClient(baseUrl);
  const snapshot = await client.createSession(4);

  root.replaceChildren(
    el("div", { id: "info" }),
    el("div", { id: "controls" }),
    el("div", { id: "board" }),
    el("div", { id: "picker" }),
    el("img", { id: "served", alt: "server rendering" }),
  );

  const app: App = { client, state: newBoardState(snapshot), root };

  const controls = root.querySelector("#controls")!;
  const button = (label: string, onClick: () => void) => {
    const b = el("button", {}, label);
    b.addEventListener("click", onClick);
    controls.appendChild(b);
  };
  button("rotate", () => {
    app.state = cycleChoice(app.state, 1);
    redraw(app);
  });
  button("place", () => void onPlace(app));
  button("undo", () => void onUndo(app));
  button("hints", () => void onHint(app));

  redraw(app);
}
