/**
 * Contract tests: recorded API responses must render exactly as many cards,
 * badges, and markers as the payload dictates. The fixtures come from
 * tools/record_fixtures.py against the packaged corpus.
 */

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { DEGRADED_BANNER, levelBadge, renderCard, renderResults } from "../src/render.js";
import type { RecommendResponse } from "../src/types.js";

interface GoldenRecord {
  query: string;
  mode: string;
  status: number;
  body: RecommendResponse;
}

const golden: GoldenRecord[] = JSON.parse(
  readFileSync(new URL("./fixtures/golden.json", import.meta.url), "utf-8"),
);

function count(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}

describe("golden fixtures", () => {
  it("has ten recorded queries with both outcomes", () => {
    expect(golden.length).toBe(10);
    expect(golden.every((g) => g.status === 200)).toBe(true);
    expect(golden.some((g) => g.body.recipes.length === 0)).toBe(true);
    expect(golden.some((g) => g.body.recipes.length > 0)).toBe(true);
  });

  it.each(golden.map((g) => [g.query, g] as const))(
    "renders %s with the fixture's card count and badges",
    (_query, record) => {
      const html = renderResults(record.body);

      expect(count(html, 'class="card"')).toBe(record.body.recipes.length);
      for (const recipe of record.body.recipes) {
        expect(html).toContain(levelBadge(recipe.level));
        expect(html).toContain(`data-recipe-id="${recipe.id}"`);
      }
      if (record.body.recipes.length === 0) {
        expect(count(html, 'class="unprocessed-marker"')).toBe(1);
      } else {
        expect(html).not.toContain("unprocessed-marker");
      }
      expect(html).toContain(`data-kind="${record.body.demand_kind}"`);
    },
  );

  it("keeps cards in the API's order", () => {
    const multi = golden.find((g) => g.body.recipes.length > 1)!;
    const html = renderResults(multi.body);
    const ids = [...html.matchAll(/data-recipe-id="([^"]+)"/g)].map((m) => m[1]);
    expect(ids).toEqual(multi.body.recipes.map((r) => r.id));
  });

  it("shows the degraded banner only when the flag is set", () => {
    const base = golden.find((g) => g.body.recipes.length > 0)!.body;
    expect(renderResults(base)).not.toContain(DEGRADED_BANNER);

    const degraded: RecommendResponse = { ...base, degraded: true };
    const html = renderResults(degraded);
    expect(html).toContain(DEGRADED_BANNER);
    expect(html).not.toContain('class="narrative"');
    // the flag changes the banner, never the cards
    expect(count(html, 'class="card"')).toBe(base.recipes.length);
  });

  it("escapes markup smuggled into recipe fields", () => {
    const card = golden.find((g) => g.body.recipes.length > 0)!.body.recipes[0];
    const hostile = { ...card, name: '<img src=x onerror="boom">' };
    const html = renderCard(hostile);
    expect(html).not.toContain("<img");
    expect(html).toContain("&lt;img");
  });
});
