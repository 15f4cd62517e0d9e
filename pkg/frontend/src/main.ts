import { ApiClient, ApiError, compareModes } from "./api.js";
import { renderCompare, renderErrorBanner, renderHistory, renderResults, renderValidationError } from "./render.js";
import { ConsoleState } from "./state.js";
import type { Mode } from "./types.js";

const state = new ConsoleState();
const client = new ApiClient((url, init) => window.fetch(url, init));

const queryInput = document.getElementById("query") as HTMLInputElement;
const modeSelect = document.getElementById("mode") as HTMLSelectElement;
const submitButton = document.getElementById("submit") as HTMLButtonElement;
const compareButton = document.getElementById("compare") as HTMLButtonElement;
const resultsPane = document.getElementById("results") as HTMLElement;
const historyPane = document.getElementById("history") as HTMLElement;

function syncButtons(): void {
  const empty = queryInput.value.trim().length === 0;
  submitButton.disabled = empty;
  compareButton.disabled = empty;
}

function refreshHistory(): void {
  historyPane.innerHTML = renderHistory(state.history);
}

async function submitQuery(): Promise<void> {
  const text = queryInput.value.trim();
  if (!text) return;
  const mode = modeSelect.value as Mode;
  const token = state.beginRequest("single");
  resultsPane.innerHTML = `<p class="loading">查询中…</p>`;
  try {
    const response = await client.recommend(text, mode);
    if (!state.isCurrent("single", token)) return; // a newer submission won
    resultsPane.innerHTML = renderResults(response);
    state.remember({
      query: text,
      mode,
      recipeCount: response.recipes.length,
      unprocessed: response.recipes.length === 0,
      traceId: response.trace_id,
    });
    refreshHistory();
  } catch (e) {
    if (!state.isCurrent("single", token)) return;
    if (e instanceof ApiError && e.status < 500) {
      resultsPane.innerHTML = renderValidationError(e.message);
    } else {
      resultsPane.innerHTML = renderErrorBanner(e instanceof Error ? e.message : String(e));
    }
  }
}

async function submitCompare(): Promise<void> {
  const text = queryInput.value.trim();
  if (!text) return;
  const token = state.beginRequest("compare");
  resultsPane.innerHTML = `<p class="loading">三种模式并发查询中…</p>`;
  const columns = await compareModes(client, text);
  if (!state.isCurrent("compare", token)) return;
  resultsPane.innerHTML = renderCompare(columns);
  const total = columns.reduce((n, c) => n + (c.response?.recipes.length ?? 0), 0);
  state.remember({
    query: text,
    mode: "compare",
    recipeCount: total,
    unprocessed: columns.every((c) => (c.response?.recipes.length ?? 0) === 0),
  });
  refreshHistory();
}

queryInput.addEventListener("input", syncButtons);
submitButton.addEventListener("click", () => void submitQuery());
compareButton.addEventListener("click", () => void submitCompare());
queryInput.addEventListener("keydown", (event) => {
  if (event.key === "Enter" && !submitButton.disabled) void submitQuery();
});
resultsPane.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  if (target.dataset.action === "retry") void submitQuery();
});

syncButtons();
