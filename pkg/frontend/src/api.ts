/** Typed client for the uidiff service. Every generation request is checked
 * against the schemas the service publishes before it goes on the wire; the
 * client performs no generation logic of its own. */

import { validateAgainstSchema } from "./schema.js";
import type {
  CategoriesResponse,
  CodeRequest,
  CodeResponse,
  JobStatus,
  LayoutGenRequest,
  LayoutsResponse,
  ProjectMeta,
  UiGenRequest,
  UisResponse,
} from "./types.js";

export class RequestInvalid extends Error {
  constructor(public issues: { path: string; message: string }[]) {
    super(issues.map((i) => `${i.path}: ${i.message}`).join("; "));
  }
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { detail?: string };
    if (body.detail) detail = body.detail;
  } catch {
    /* non-JSON error body */
  }
  return new ApiError(response.status, detail);
}

export class ApiClient {
  private schemas: Record<string, Record<string, unknown>> | null = null;

  constructor(private base: string = "") {}

  private async fetchJson<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, init);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  async loadSchemas(): Promise<void> {
    this.schemas = await this.fetchJson("/api/schemas");
  }

  /** Throws RequestInvalid when the body violates the published schema. */
  checkRequest(schemaName: string, body: unknown): void {
    if (!this.schemas) return; // schemas not loaded yet; server still validates
    const schema = this.schemas[schemaName];
    if (!schema) return;
    const issues = validateAgainstSchema(body, schema);
    if (issues.length > 0) throw new RequestInvalid(issues);
  }

  private post<T>(path: string, schemaName: string, body: unknown): Promise<T> {
    this.checkRequest(schemaName, body);
    return this.fetchJson<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  categories(): Promise<CategoriesResponse> {
    return this.fetchJson("/api/categories");
  }

  createProject(name: string): Promise<ProjectMeta> {
    return this.post("/api/projects", "ProjectCreate", { name });
  }

  getProject(id: string): Promise<ProjectMeta> {
    return this.fetchJson(`/api/projects/${id}`);
  }

  generateLayouts(projectId: string, request: LayoutGenRequest): Promise<LayoutsResponse> {
    return this.post(`/api/projects/${projectId}/layouts`, "LayoutGenRequest", request);
  }

  generateUis(projectId: string, request: UiGenRequest): Promise<UisResponse> {
    return this.post(`/api/projects/${projectId}/uis`, "UiGenRequest", request);
  }

  generateCode(projectId: string, request: CodeRequest): Promise<CodeResponse> {
    return this.post(`/api/projects/${projectId}/code`, "CodeRequest", request);
  }

  requestCrops(projectId: string, uiHash: string, layoutHash: string): Promise<unknown> {
    return this.post(`/api/projects/${projectId}/crops`, "CropRequest", {
      ui_hash: uiHash,
      layout_hash: layoutHash,
    });
  }

  jobStatus(jobId: string): Promise<JobStatus> {
    return this.fetchJson(`/api/jobs/${jobId}`);
  }

  /** Poll an async job until it settles. */
  async awaitJob(jobId: string, intervalMs = 500, maxPolls = 600): Promise<JobStatus> {
    for (let i = 0; i < maxPolls; i++) {
      const status = await this.jobStatus(jobId);
      if (status.state === "done" || status.state === "failed") return status;
      await new Promise((resolve) => setTimeout(resolve, intervalMs));
    }
    throw new ApiError(408, `job ${jobId} did not settle`);
  }

  /** Raw artifact bytes, exactly as the service stores them. */
  async downloadArtifact(url: string): Promise<Blob> {
    const response = await fetch(this.base + url);
    if (!response.ok) throw await parseError(response);
    return response.blob();
  }

  artifactUrl(url: string): string {
    return this.base + url;
  }
}
