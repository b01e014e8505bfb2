import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

import type { Snapshot } from "../src/types.js";

export interface Recorded<T> {
  status: number;
  body: T;
}

export function fixture<T = unknown>(name: string): Recorded<T> {
  const path = fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));
  return JSON.parse(readFileSync(path, "utf-8")) as Recorded<T>;
}

export function fixtureText(name: string): string {
  const path = fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));
  return readFileSync(path, "utf-8");
}

export function snapshotFixture(name: string): Snapshot {
  return fixture<Snapshot>(name).body;
}

/** A Response the way the service would have sent it. */
export function cannedResponse(recorded: Recorded<unknown>): Response {
  return new Response(JSON.stringify(recorded.body), {
    status: recorded.status,
    headers: { "Content-Type": "application/json" },
  });
}
