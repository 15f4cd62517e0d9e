import type { Mode, RecommendResponse, TracePayload } from "./types.js";
import { MODES } from "./types.js";

/**
 * The slice of fetch the console actually uses. Tests inject fakes; the
 * browser entry point passes window.fetch.
 */
export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<FetchResponseLike>;

export interface FetchResponseLike {
  status: number;
  json(): Promise<unknown>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

function errorMessage(payload: unknown, status: number): string {
  if (payload && typeof payload === "object" && "error" in payload) {
    return String((payload as { error: unknown }).error);
  }
  return `request failed with status ${status}`;
}

export class ApiClient {
  constructor(
    private readonly fetchImpl: FetchLike,
    private readonly baseUrl = "",
  ) {}

  async recommend(query: string, mode: Mode, k?: number): Promise<RecommendResponse> {
    const body: Record<string, unknown> = { query, mode };
    if (k !== undefined) body.k = k;
    const resp = await this.fetchImpl(`${this.baseUrl}/api/recommend`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    const payload = await resp.json();
    if (resp.status !== 200) {
      throw new ApiError(resp.status, errorMessage(payload, resp.status));
    }
    return payload as RecommendResponse;
  }

  async trace(traceId: string): Promise<TracePayload> {
    const resp = await this.fetchImpl(`${this.baseUrl}/api/trace/${traceId}`);
    const payload = await resp.json();
    if (resp.status !== 200) {
      throw new ApiError(resp.status, errorMessage(payload, resp.status));
    }
    return payload as TracePayload;
  }
}

export interface CompareColumn {
  mode: Mode;
  response?: RecommendResponse;
  error?: string;
}

/**
 * One request per mode, all in flight together. A failed column carries its
 * own error so the other two still render.
 */
export async function compareModes(client: ApiClient, query: string): Promise<CompareColumn[]> {
  return Promise.all(
    MODES.map(async (mode): Promise<CompareColumn> => {
      try {
        return { mode, response: await client.recommend(query, mode) };
      } catch (e) {
        return { mode, error: e instanceof Error ? e.message : String(e) };
      }
    }),
  );
}
