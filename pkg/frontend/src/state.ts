/** Session state: the component palette selection, prompt, gallery entries
 * and the active project. The server is the source of truth; reloading a
 * tab restores everything from the project id in the URL. */

import type { LayoutGenRequest, LayoutsResponse, UisResponse } from "./types.js";

export interface GalleryEntry {
  requestId: string;
  status: "pending" | "done" | "error";
  prompt: string;
  seed: number;
  layouts?: LayoutsResponse["data"];
  uisByLayout: Map<string, UisResponse["data"]>;
  errorMessage?: string;
}

export interface SessionState {
  projectId: string | null;
  prompt: string;
  seed: number;
  palette: Map<string, number>;
  gallery: Map<string, GalleryEntry>;
  selectedLayout: string | null;
  selectedUi: string | null;
  eMax: number;
}

export function newSession(eMax = 20): SessionState {
  return {
    projectId: null,
    prompt: "",
    seed: Math.floor(Math.random() * 1_000_000),
    palette: new Map(),
    gallery: new Map(),
    selectedLayout: null,
    selectedUi: null,
    eMax,
  };
}

export class ComposeError extends Error {}

export function paletteTotal(state: SessionState): number {
  let total = 0;
  for (const count of state.palette.values()) total += count;
  return total;
}

export function adjustPalette(state: SessionState, category: string, delta: number): void {
  const next = (state.palette.get(category) ?? 0) + delta;
  if (next <= 0) {
    state.palette.delete(category);
    return;
  }
  if (paletteTotal(state) + delta > state.eMax) {
    throw new ComposeError(`at most ${state.eMax} components per layout`);
  }
  state.palette.set(category, next);
}

/** Serialize the current selection into the service's request schema.
 * Fails before any network call when both inputs are empty or the palette
 * exceeds the element budget. */
export function composeRequest(state: SessionState): LayoutGenRequest {
  const total = paletteTotal(state);
  if (state.prompt.trim() === "" && total === 0) {
    throw new ComposeError("pick components or write a description first");
  }
  if (total > state.eMax) {
    throw new ComposeError(`at most ${state.eMax} components per layout (got ${total})`);
  }
  const components: Record<string, number> = {};
  for (const [name, count] of state.palette) components[name] = count;
  return {
    prompt: state.prompt,
    components,
    seed: state.seed,
    n_layouts: 1,
  };
}

export function sessionUrl(state: SessionState): string {
  return state.projectId ? `?project=${encodeURIComponent(state.projectId)}` : "?";
}

export function projectIdFromUrl(search: string): string | null {
  return new URLSearchParams(search).get("project");
}
