import type { Mode } from "./types.js";

export interface HistoryEntry {
  query: string;
  mode: Mode | "compare";
  recipeCount: number;
  unprocessed: boolean;
  traceId?: string;
}

export type Pane = "single" | "compare";

/**
 * In-memory session state. History is append-only; nothing here ever edits
 * a stored entry or a response object. Each pane carries a monotonically
 * increasing request sequence so a slow response that comes back after a
 * newer submission is discarded instead of overwriting it.
 */
export class ConsoleState {
  private readonly entries: HistoryEntry[] = [];
  private readonly sequences: Record<Pane, number> = { single: 0, compare: 0 };

  beginRequest(pane: Pane): number {
    this.sequences[pane] += 1;
    return this.sequences[pane];
  }

  isCurrent(pane: Pane, token: number): boolean {
    return this.sequences[pane] === token;
  }

  remember(entry: HistoryEntry): void {
    this.entries.push(entry);
  }

  get history(): readonly HistoryEntry[] {
    return this.entries;
  }
}
