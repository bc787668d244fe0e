/** Gallery view: one row per generation — the wireframe thumbnail followed
 * by the generated UI images; clicking a UI opens the crop/export panel. */

import type { ApiClient } from "./api.js";
import type { GalleryEntry } from "./state.js";
import type { LayoutEntry, UiEntry } from "./types.js";

export interface GalleryHandlers {
  onRegenerate(entry: GalleryEntry): void;
  onRetry(entry: GalleryEntry): void;
  onSelectUi(layout: LayoutEntry, ui: UiEntry): void;
  onExportCode(layout: LayoutEntry, format: "xml" | "html"): void;
  onCrop(layout: LayoutEntry, ui: UiEntry): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderEmptyState(): HTMLElement {
  const box = el("div", "empty-state");
  box.append(
    el("h2", undefined, "No generations yet"),
    el(
      "p",
      undefined,
      "Pick components from the palette, describe the screen, and hit Generate.",
    ),
  );
  return box;
}

export function renderGallery(
  api: ApiClient,
  entries: GalleryEntry[],
  handlers: GalleryHandlers,
): HTMLElement {
  const root = el("div", "gallery");
  if (entries.length === 0) {
    root.append(renderEmptyState());
    return root;
  }
  for (const entry of entries) {
    root.append(renderRow(api, entry, handlers));
  }
  return root;
}

function renderRow(api: ApiClient, entry: GalleryEntry, handlers: GalleryHandlers): HTMLElement {
  const row = el("section", "gallery-row");
  row.dataset.requestId = entry.requestId;

  const header = el("header", "row-header");
  header.append(el("span", "row-prompt", entry.prompt || "(no description)"));
  header.append(el("span", "row-seed", `seed ${entry.seed}`));
  const regenerate = el("button", "regenerate", "Regenerate");
  regenerate.addEventListener("click", () => handlers.onRegenerate(entry));
  header.append(regenerate);
  row.append(header);

  if (entry.status === "error") {
    const placeholder = el("div", "tile placeholder error-tile");
    placeholder.append(el("p", undefined, entry.errorMessage ?? "generation failed"));
    const retry = el("button", "retry", "Retry");
    retry.addEventListener("click", () => handlers.onRetry(entry));
    placeholder.append(retry);
    row.append(placeholder);
    return row;
  }
  if (entry.status === "pending" || !entry.layouts) {
    row.append(el("div", "tile placeholder pending-tile", "generating…"));
    return row;
  }

  for (const layout of entry.layouts) {
    const strip = el("div", "layout-strip");
    const wireframe = el("figure", "tile wireframe-tile");
    const wfImg = el("img") as HTMLImageElement;
    wfImg.src = api.artifactUrl(layout.wireframe_url);
    wfImg.alt = "layout wireframe";
    wireframe.append(wfImg, el("figcaption", undefined, "layout"));
    strip.append(wireframe);

    const uis = entry.uisByLayout.get(layout.layout_hash);
    if (uis) {
      for (const ui of uis.images) {
        const tile = el("figure", "tile ui-tile");
        const img = el("img") as HTMLImageElement;
        img.src = api.artifactUrl(ui.ui_url);
        img.alt = `generated ui (seed ${ui.seed})`;
        img.addEventListener("click", () => handlers.onSelectUi(layout, ui));
        tile.append(img);
        strip.append(tile);
      }
    } else {
      strip.append(el("div", "tile placeholder", "no UI images yet"));
    }

    const actions = el("div", "strip-actions");
    const exportXml = el("button", "export-xml", "Export XML");
    exportXml.addEventListener("click", () => handlers.onExportCode(layout, "xml"));
    const exportHtml = el("button", "export-html", "Export HTML");
    exportHtml.addEventListener("click", () => handlers.onExportCode(layout, "html"));
    actions.append(exportXml, exportHtml);
    strip.append(actions);
    row.append(strip);
  }
  return row;
}

export function renderExportPanel(
  layout: LayoutEntry,
  ui: UiEntry,
  handlers: GalleryHandlers,
): HTMLElement {
  const panel = el("aside", "export-panel");
  panel.append(el("h3", undefined, `UI from seed ${ui.seed}`));
  const crop = el("button", "crop-components", "Crop components");
  crop.addEventListener("click", () => handlers.onCrop(layout, ui));
  const exportXml = el("button", "export-xml", "Export XML");
  exportXml.addEventListener("click", () => handlers.onExportCode(layout, "xml"));
  const exportHtml = el("button", "export-html", "Export HTML");
  exportHtml.addEventListener("click", () => handlers.onExportCode(layout, "html"));
  panel.append(crop, exportXml, exportHtml);
  return panel;
}
