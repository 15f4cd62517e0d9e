import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, type FetchLike } from "../src/api.js";

function fetchReturning(status: number, body: unknown) {
  const calls: { url: string; init?: Parameters<FetchLike>[1] }[] = [];
  const fetchImpl: FetchLike = async (url, init) => {
    calls.push({ url, init });
    return { status, json: async () => body };
  };
  return { fetchImpl, calls };
}

describe("ApiClient", () => {
  it("posts query, mode, and optional k to the recommend endpoint", async () => {
    const { fetchImpl, calls } = fetchReturning(200, {
      recipes: [], narrative: "", demand_kind: "clear", degraded: false, generation: 1, trace_id: "t",
    });
    const client = new ApiClient(fetchImpl, "http://svc");

    await client.recommend("番茄炒蛋", "full");
    await client.recommend("番茄炒蛋", "llm_kg", 3);

    expect(calls[0].url).toBe("http://svc/api/recommend");
    expect(JSON.parse(calls[0].init?.body ?? "")).toEqual({ query: "番茄炒蛋", mode: "full" });
    expect(JSON.parse(calls[1].init?.body ?? "")).toEqual({ query: "番茄炒蛋", mode: "llm_kg", k: 3 });
    expect(calls[0].init?.headers?.["content-type"]).toBe("application/json");
  });

  it("surfaces the server's error string on non-200", async () => {
    const { fetchImpl } = fetchReturning(400, { error: "EmptyQuery" });
    const client = new ApiClient(fetchImpl);

    await expect(client.recommend("  ", "full")).rejects.toThrowError(ApiError);
    await expect(client.recommend("  ", "full")).rejects.toMatchObject({
      status: 400,
      message: "EmptyQuery",
    });
  });

  it("falls back to a generic message when the body has no error field", async () => {
    const { fetchImpl } = fetchReturning(502, "bad gateway");
    await expect(new ApiClient(fetchImpl).recommend("随便", "full")).rejects.toMatchObject({
      status: 502,
      message: "request failed with status 502",
    });
  });

  it("fetches traces by id", async () => {
    const { fetchImpl, calls } = fetchReturning(200, { query: "随便", mode: "full", outcome: "answered" });
    const trace = await new ApiClient(fetchImpl).trace("abc123");
    expect(calls[0].url).toBe("/api/trace/abc123");
    expect(trace.outcome).toBe("answered");
  });
});
