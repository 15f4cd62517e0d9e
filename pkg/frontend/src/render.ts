/**
 * Pure HTML-string renderers. No DOM access, no state: every function maps
 * response data to markup, which is what lets the contract tests replay
 * recorded API responses in plain node. Rendering never mutates its input.
 */

import type { CompareColumn } from "./api.js";
import type { HistoryEntry } from "./state.js";
import type { RecipeCard, RecommendResponse } from "./types.js";
import { MODE_LABELS } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function levelBadge(level: number): string {
  return `<span class="badge level-${level}">L${level}</span>`;
}

function renderPath(card: RecipeCard): string {
  const hops = card.path.hops
    .map(([from, edge, to]) => `<li>${escapeHtml(from)} —${escapeHtml(edge)}→ ${escapeHtml(to)}</li>`)
    .join("");
  const conditions = card.path.satisfied_conditions
    .map((c) => `<li>${escapeHtml(c)}</li>`)
    .join("");
  return (
    `<details class="path"><summary>检索路径</summary>` +
    `<ol class="hops">${hops}</ol>` +
    `<ul class="conditions">${conditions}</ul></details>`
  );
}

export function renderCard(card: RecipeCard): string {
  const snippets = card.snippets.length
    ? `<ul class="snippets">${card.snippets.map((s) => `<li>${escapeHtml(s)}</li>`).join("")}</ul>`
    : "";
  return (
    `<article class="card" data-recipe-id="${escapeHtml(card.id)}">` +
    `<header><h3>${escapeHtml(card.name)}</h3>${levelBadge(card.level)}` +
    `<span class="score">${card.score.toFixed(3)}</span></header>` +
    `<p class="reason">${escapeHtml(card.reason)}</p>` +
    renderPath(card) +
    snippets +
    `</article>`
  );
}

export const DEGRADED_BANNER =
  `<div class="banner degraded">生成服务暂不可用，以下为结构化结果。</div>`;

export function unprocessedMarker(narrative: string): string {
  return `<p class="unprocessed-marker">${escapeHtml(narrative)}</p>`;
}

export function renderResults(response: RecommendResponse): string {
  const parts: string[] = [];
  if (response.degraded) {
    parts.push(DEGRADED_BANNER);
  } else {
    parts.push(`<p class="narrative">${escapeHtml(response.narrative)}</p>`);
  }
  parts.push(
    `<p class="demand-kind" data-kind="${response.demand_kind}">` +
      `需求类型：${response.demand_kind === "fuzzy" ? "模糊" : "明确"}</p>`,
  );
  if (response.recipes.length === 0) {
    parts.push(unprocessedMarker(response.narrative));
  } else {
    parts.push(response.recipes.map(renderCard).join(""));
  }
  return parts.join("");
}

export function renderErrorBanner(message: string): string {
  return (
    `<div class="banner error">${escapeHtml(message)}` +
    `<button type="button" data-action="retry">重试</button></div>`
  );
}

export function renderValidationError(message: string): string {
  return `<p class="field-error">${escapeHtml(message)}</p>`;
}

export function renderCompare(columns: CompareColumn[]): string {
  const rendered = columns.map((column) => {
    const label = MODE_LABELS[column.mode];
    let body: string;
    if (column.error !== undefined) {
      body = renderErrorBanner(column.error);
    } else if (column.response) {
      const count = column.response.recipes.length;
      body =
        `<p class="count">${count} 个结果</p>` +
        (count === 0
          ? unprocessedMarker(column.response.narrative)
          : column.response.recipes.map(renderCard).join(""));
    } else {
      body = `<p class="count">等待中</p>`;
    }
    return (
      `<section class="compare-column" data-mode="${column.mode}">` +
      `<h2>${escapeHtml(label)}</h2>${body}</section>`
    );
  });
  return `<div class="compare">${rendered.join("")}</div>`;
}

export function renderHistory(entries: readonly HistoryEntry[]): string {
  if (entries.length === 0) return "";
  const items = entries
    .map((e) => {
      const status = e.unprocessed ? "未处理" : `${e.recipeCount} 个结果`;
      return `<li><span class="history-query">${escapeHtml(e.query)}</span> · ${e.mode} · ${status}</li>`;
    })
    .join("");
  return `<ol class="history">${items}</ol>`;
}
