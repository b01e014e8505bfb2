/** Thin fetch client for the tiler service; all knowledge of routes and
 * verbs lives here. */

import type {
  Cell,
  ErrorBody,
  HintResponse,
  LegalResponse,
  RulesetDoc,
  Snapshot,
  StateDoc,
  Violation,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly body: unknown,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Mutations resolve to this instead of throwing on 409: a refusal carries
 * the violations the UI must show, it is not an exceptional path. */
export type MutationResult =
  | { ok: true; snapshot: Snapshot }
  | { ok: false; status: number; error: string; violations: Violation[] };

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class TilerClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  private async request(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<Response> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { "Content-Type": "application/json" };
    }
    return this.fetchFn(this.url(path), init);
  }

  private async expectJson<T>(resp: Response): Promise<T> {
    const data: unknown = await resp.json();
    if (!resp.ok) {
      const err = data as ErrorBody;
      throw new ApiError(resp.status, err.error ?? resp.statusText, data);
    }
    return data as T;
  }

  private async mutate(path: string, body?: unknown): Promise<MutationResult> {
    const resp = await this.request("POST", path, body);
    const data: unknown = await resp.json();
    if (resp.ok) {
      return { ok: true, snapshot: data as Snapshot };
    }
    if (resp.status === 409) {
      const err = data as ErrorBody;
      return {
        ok: false,
        status: resp.status,
        error: err.error,
        violations: err.violations ?? [],
      };
    }
    const err = data as ErrorBody;
    throw new ApiError(resp.status, err.error ?? resp.statusText, data);
  }

  async createSession(radius?: number): Promise<Snapshot> {
    const body = radius === undefined ? {} : { radius };
    const resp = await this.request("POST", "/sessions", body);
    return this.expectJson<Snapshot>(resp);
  }

  async getSession(id: string): Promise<Snapshot> {
    const resp = await this.request("GET", `/sessions/${id}`);
    return this.expectJson<Snapshot>(resp);
  }

  async legal(id: string, cell: Cell): Promise<LegalResponse> {
    const resp = await this.request(
      "GET",
      `/sessions/${id}/legal?q=${cell[0]}&r=${cell[1]}`,
    );
    return this.expectJson<LegalResponse>(resp);
  }

  async place(id: string, cell: Cell, state: StateDoc): Promise<MutationResult> {
    return this.mutate(`/sessions/${id}/place`, {
      q: cell[0],
      r: cell[1],
      state,
    });
  }

  async undo(id: string): Promise<MutationResult> {
    return this.mutate(`/sessions/${id}/undo`);
  }

  async hint(id: string): Promise<Cell[]> {
    const resp = await this.request("GET", `/sessions/${id}/hint`);
    const body = await this.expectJson<HintResponse>(resp);
    return body.cells.map((c) => [c[0]!, c[1]!] as const);
  }

  async ruleset(): Promise<RulesetDoc> {
    const resp = await this.request("GET", "/ruleset");
    return this.expectJson<RulesetDoc>(resp);
  }

  sessionSvgUrl(id: string, style: string, revision?: number): string {
    const bust = revision === undefined ? "" : `&rev=${revision}`;
    return this.url(`/sessions/${id}/render.svg?style=${style}${bust}`);
  }

  tileSvgUrl(state: StateDoc, style: string): string {
    return this.url(
      `/tiles/render.svg?variant=${encodeURIComponent(state.variant)}` +
        `&orientation=${state.orientation}` +
        `&chirality=${encodeURIComponent(state.chirality)}&style=${style}`,
    );
  }
}
