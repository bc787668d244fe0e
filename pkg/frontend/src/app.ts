/** Studio bootstrap: palette from /api/categories, request composition,
 * generation with job polling, gallery rendering, crop/export actions.
 * All artifacts come from the service; nothing is generated client-side. */

import { ApiClient, ApiError, RequestInvalid } from "./api.js";
import {
  renderExportPanel,
  renderGallery,
  type GalleryHandlers,
} from "./gallery.js";
import {
  ComposeError,
  adjustPalette,
  composeRequest,
  newSession,
  paletteTotal,
  projectIdFromUrl,
  sessionUrl,
  type GalleryEntry,
  type SessionState,
} from "./state.js";
import type { CategoriesResponse, LayoutEntry, UiEntry } from "./types.js";

const UIS_PER_LAYOUT = 6;
const SAMPLER_STEPS = 50;

export class StudioApp {
  state: SessionState;
  private categories: CategoriesResponse | null = null;

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
  ) {
    this.state = newSession();
  }

  async start(search: string = window.location.search): Promise<void> {
    await this.api.loadSchemas();
    this.categories = await this.api.categories();
    this.state.eMax = this.categories.e_max;
    const existing = projectIdFromUrl(search);
    if (existing) {
      try {
        await this.restoreProject(existing);
      } catch {
        this.state.projectId = null;
      }
    }
    this.render();
  }

  private async ensureProject(): Promise<string> {
    if (this.state.projectId) return this.state.projectId;
    const project = await this.api.createProject("studio session");
    this.state.projectId = project.id;
    history.replaceState(null, "", sessionUrl(this.state));
    return project.id;
  }

  private async restoreProject(projectId: string): Promise<void> {
    const project = await this.api.getProject(projectId);
    this.state.projectId = project.id;
    // Rebuild the gallery from the server's stored results: layouts first,
    // then attach UI batches to the layout they were generated from.
    const layoutsByHash = new Map<string, LayoutEntry>();
    for (const result of project.results) {
      if (result.kind !== "layouts") continue;
      const request = result.request as { prompt?: string; seed?: number };
      const entry: GalleryEntry = {
        requestId: result.id,
        status: "done",
        prompt: request.prompt ?? "",
        seed: request.seed ?? 0,
        layouts: [],
        uisByLayout: new Map(),
      };
      for (const artifact of result.artifacts) {
        if (artifact.role !== "layout") continue;
        const blob = await this.api.downloadArtifact(`/api/artifacts/${artifact.hash}`);
        const layout = JSON.parse(await blob.text());
        const wireframe = result.artifacts.find(
          (a, i) => a.role === "wireframe" && result.artifacts[i - 1]?.hash === artifact.hash,
        );
        const layoutEntry: LayoutEntry = {
          seed: request.seed ?? 0,
          layout_hash: artifact.hash,
          layout_url: `/api/artifacts/${artifact.hash}`,
          wireframe_url: wireframe ? `/api/artifacts/${wireframe.hash}` : "",
          layout,
          metrics: {},
        };
        entry.layouts!.push(layoutEntry);
        layoutsByHash.set(artifact.hash, layoutEntry);
      }
      this.state.gallery.set(entry.requestId, entry);
    }
    for (const result of project.results) {
      if (result.kind !== "uis") continue;
      const request = result.request as { layout_hash: string; seed: number };
      for (const entry of this.state.gallery.values()) {
        if (!entry.layouts?.some((l) => l.layout_hash === request.layout_hash)) continue;
        entry.uisByLayout.set(request.layout_hash, {
          images: result.artifacts.map((a, i) => ({
            seed: request.seed + i,
            ui_hash: a.hash,
            ui_url: `/api/artifacts/${a.hash}`,
          })),
          metrics: {},
        });
      }
    }
  }

  async generate(): Promise<void> {
    let request;
    try {
      request = composeRequest(this.state);
    } catch (error) {
      if (error instanceof ComposeError) {
        this.showMessage(error.message);
        return;
      }
      throw error;
    }
    const projectId = await this.ensureProject();
    const entry: GalleryEntry = {
      requestId: `req-${Date.now()}-${this.state.seed}`,
      status: "pending",
      prompt: request.prompt,
      seed: request.seed,
      uisByLayout: new Map(),
    };
    this.state.gallery.set(entry.requestId, entry);
    this.render();
    try {
      const layouts = await this.api.generateLayouts(projectId, request);
      entry.layouts = layouts.data;
      for (const layout of layouts.data) {
        const uis = await this.api.generateUis(projectId, {
          layout_hash: layout.layout_hash,
          prompt: request.prompt,
          seed: request.seed,
          n_uis_per_layout: UIS_PER_LAYOUT,
          steps: SAMPLER_STEPS,
        });
        entry.uisByLayout.set(layout.layout_hash, uis.data);
      }
      entry.status = "done";
    } catch (error) {
      entry.status = "error";
      entry.errorMessage =
        error instanceof ApiError || error instanceof RequestInvalid
          ? error.message
          : "generation failed";
    }
    this.render();
  }

  private handlers(): GalleryHandlers {
    return {
      onRegenerate: (entry) => {
        // Feed the next iteration: same inputs, next seed.
        this.state.seed = entry.seed + 1;
        this.state.prompt = entry.prompt;
        void this.generate();
      },
      onRetry: (entry) => {
        this.state.seed = entry.seed;
        this.state.prompt = entry.prompt;
        this.state.gallery.delete(entry.requestId);
        void this.generate();
      },
      onSelectUi: (layout, ui) => {
        this.state.selectedLayout = layout.layout_hash;
        this.state.selectedUi = ui.ui_hash;
        this.renderPanel(layout, ui);
      },
      onExportCode: (layout, format) => void this.exportCode(layout, format),
      onCrop: (layout, ui) => void this.cropComponents(layout, ui),
    };
  }

  /** Download the service's code artifact for a layout, byte for byte. */
  async exportCode(layout: LayoutEntry, format: "xml" | "html"): Promise<Blob> {
    const projectId = await this.ensureProject();
    const response = await this.api.generateCode(projectId, {
      layout_hash: layout.layout_hash,
      format,
    });
    const blob = await this.api.downloadArtifact(response.data.code_url);
    this.triggerDownload(blob, `layout-${layout.layout_hash.slice(0, 8)}.${format}`);
    return blob;
  }

  async cropComponents(layout: LayoutEntry, ui: UiEntry): Promise<void> {
    const projectId = await this.ensureProject();
    await this.api.requestCrops(projectId, ui.ui_hash, layout.layout_hash);
    this.showMessage("components cropped; see the project artifacts");
  }

  private triggerDownload(blob: Blob, filename: string): void {
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = filename;
    link.click();
    URL.revokeObjectURL(link.href);
  }

  showMessage(text: string): void {
    const banner = this.root.querySelector(".message-banner");
    if (banner) banner.textContent = text;
  }

  private renderPanel(layout: LayoutEntry, ui: UiEntry): void {
    const host = this.root.querySelector(".panel-host");
    if (!host) return;
    host.replaceChildren(renderExportPanel(layout, ui, this.handlers()));
  }

  render(): void {
    const palette = this.root.querySelector(".palette-host");
    if (palette && this.categories) {
      palette.replaceChildren(this.renderPalette(this.categories));
    }
    const gallery = this.root.querySelector(".gallery-host");
    if (gallery) {
      gallery.replaceChildren(
        renderGallery(this.api, [...this.state.gallery.values()].reverse(), this.handlers()),
      );
    }
    const counter = this.root.querySelector(".palette-count");
    if (counter) {
      counter.textContent = `${paletteTotal(this.state)} / ${this.state.eMax}`;
    }
  }

  private renderPalette(categories: CategoriesResponse): HTMLElement {
    const list = document.createElement("div");
    list.className = "palette";
    for (const category of categories.categories) {
      const chip = document.createElement("button");
      chip.className = "chip";
      chip.dataset.category = category.name;
      const count = this.state.palette.get(category.name) ?? 0;
      chip.textContent = count > 0 ? `${category.name} ×${count}` : category.name;
      chip.style.borderColor = category.color;
      if (count > 0) chip.classList.add("selected");
      chip.addEventListener("click", () => {
        try {
          adjustPalette(this.state, category.name, 1);
        } catch (error) {
          if (error instanceof ComposeError) this.showMessage(error.message);
        }
        this.render();
      });
      chip.addEventListener("contextmenu", (event) => {
        event.preventDefault();
        adjustPalette(this.state, category.name, -1);
        this.render();
      });
      list.append(chip);
    }
    return list;
  }
}

export function mountStudio(root: HTMLElement, base = ""): StudioApp {
  const api = new ApiClient(base);
  const app = new StudioApp(api, root);
  const form = root.querySelector(".compose-form");
  const promptInput = root.querySelector<HTMLInputElement>(".prompt-input");
  if (form && promptInput) {
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      app.state.prompt = promptInput.value;
      void app.generate();
    });
  }
  return app;
}
