/** Payload shapes of the uidiff REST API. */

export interface CategoryInfo {
  id: number;
  name: string;
  color: string;
}

export interface CategoriesResponse {
  palette_version: string;
  background: string;
  e_max: number;
  categories: CategoryInfo[];
}

export interface LayoutGenRequest {
  prompt: string;
  components: Record<string, number>;
  seed: number;
  n_layouts: number;
}

export interface UiGenRequest {
  layout_hash: string;
  prompt: string;
  seed: number;
  n_uis_per_layout: number;
  steps: number;
}

export interface CodeRequest {
  layout_hash: string;
  ui_hash?: string;
  format: "xml" | "html";
}

export interface LayoutEntry {
  seed: number;
  layout_hash: string;
  layout_url: string;
  wireframe_url: string;
  layout: unknown;
  metrics: Record<string, number>;
}

export interface UiEntry {
  seed: number;
  ui_hash: string;
  ui_url: string;
}

export interface GenerationResponse<T> {
  result_id: string;
  kind: string;
  data: T;
  timings?: Record<string, number>;
  checkpoint_ids?: Record<string, string>;
}

export type LayoutsResponse = GenerationResponse<LayoutEntry[]>;
export type UisResponse = GenerationResponse<{ images: UiEntry[]; metrics: Record<string, number> }>;
export type CodeResponse = GenerationResponse<{ code_url: string; format: string; nodes: number }>;

export interface JobStatus {
  job_id: string;
  state: "queued" | "running" | "done" | "failed";
  result: unknown;
  error: string | null;
}

export interface ProjectMeta {
  id: string;
  name: string;
  created_at: string;
  results: StoredResult[];
}

export interface StoredResult {
  id: string;
  kind: string;
  request: Record<string, unknown>;
  artifacts: { hash: string; ext: string; role: string }[];
}
