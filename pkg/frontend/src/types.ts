/**
 * Wire types for the recommendation API, hand-mirrored from the service's
 * JSON payloads. The contract tests in test/render.test.ts replay recorded
 * responses through these shapes, so a drift here fails loudly.
 */

export type Mode = "full" | "llm_kg" | "llm_rag";

export const MODES: readonly Mode[] = ["full", "llm_kg", "llm_rag"];

export const MODE_LABELS: Record<Mode, string> = {
  full: "完整管线",
  llm_kg: "LLM+KG",
  llm_rag: "LLM+RAG",
};

/** One hop through the graph: [from, edge type, to]. */
export type Hop = [string, string, string];

export interface RetrievalPath {
  hops: Hop[];
  satisfied_conditions: string[];
}

export interface RecipeCard {
  id: string;
  name: string;
  reason: string;
  score: number;
  level: number;
  path: RetrievalPath;
  snippets: string[];
}

export interface RecommendResponse {
  recipes: RecipeCard[];
  narrative: string;
  demand_kind: "fuzzy" | "clear";
  degraded: boolean;
  generation: number;
  trace_id: string;
}

export interface TracePayload {
  query: string;
  mode: string;
  outcome: string;
  [key: string]: unknown;
}
