"""HTTP service orchestrating the generation pipeline.

Stateless handlers over immutable checkpoint snapshots; generation funnels
through a bounded job queue (sync by default, async with ?mode=async). Every
stored result records (checkpoint ids, request, seed), so the replay endpoint
can regenerate byte-identical artifacts.
"""

from __future__ import annotations

import io
import json
import time
from hashlib import sha256
from pathlib import Path
from typing import Literal

import numpy as np
from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import FileResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from ..core import (
    CATEGORIES,
    DEFAULT_E_MAX,
    layout_from_json,
    layout_metrics,
    layout_to_json,
)
from ..layout_diffusion import (
    ComponentCondition,
    load_layout_checkpoint,
    sample as sample_layout,
)
from ..postprocess import crop_components, emit_html, emit_xml, generate_code
from ..ui_diffusion import generate_ui, load_ui_checkpoint
from ..wireframe import DEFAULT_PALETTE, render_wireframe
from .jobs import JobQueue, QueueFull
from .store import NotFound, ProjectStore, StoredResult

MEDIA_TYPES = {
    ".png": "image/png",
    ".json": "application/json",
    ".html": "text/html",
    ".xml": "application/xml",
}


class ProjectCreate(BaseModel):
    name: str = Field(min_length=1, max_length=120)


class LayoutGenRequest(BaseModel):
    prompt: str = ""
    components: dict[str, int] | str = Field(default_factory=dict)
    seed: int = 0
    n_layouts: int = Field(default=1, ge=1, le=16)


class UiGenRequest(BaseModel):
    layout_hash: str
    prompt: str = ""
    seed: int = 0
    n_uis_per_layout: int = Field(default=6, ge=1, le=12)
    steps: int = Field(default=50, ge=1, le=1000)


class CropRequest(BaseModel):
    ui_hash: str
    layout_hash: str


class CodeRequest(BaseModel):
    layout_hash: str
    ui_hash: str | None = None
    format: Literal["xml", "html"] = "xml"


class LayoutEntryModel(BaseModel):
    seed: int
    layout_hash: str
    layout_url: str
    wireframe_url: str
    layout: dict
    metrics: dict[str, float]


class UiImageModel(BaseModel):
    seed: int
    ui_hash: str
    ui_url: str


class UisDataModel(BaseModel):
    images: list[UiImageModel]
    metrics: dict[str, float]


class CropEntryModel(BaseModel):
    category: str
    rect: list[int]
    occluded_fraction: float
    fill_color: list[int] | None
    fully_occluded: bool
    crop_url: str


class CodeDataModel(BaseModel):
    code_url: str
    format: str
    nodes: int


class GenerationResponseModel(BaseModel):
    result_id: str
    kind: Literal["layouts", "uis", "crops", "code"]
    data: list[LayoutEntryModel] | UisDataModel | list[CropEntryModel] | CodeDataModel
    timings: dict[str, float] = {}
    checkpoint_ids: dict[str, str] = {}


class ProjectModel(BaseModel):
    id: str
    name: str
    created_at: str
    results: list[dict]


class CategoryModel(BaseModel):
    id: int
    name: str
    color: str


class CategoriesModel(BaseModel):
    palette_version: str
    background: str
    e_max: int
    categories: list[CategoryModel]


class JobModel(BaseModel):
    job_id: str
    state: Literal["queued", "running", "done", "failed"]
    result: object | None = None
    error: str | None = None


class ReplayModel(BaseModel):
    reproducible: bool
    stored: list[str]
    regenerated: list[str]


SCHEMA_MODELS = {
    "ProjectCreate": ProjectCreate,
    "LayoutGenRequest": LayoutGenRequest,
    "UiGenRequest": UiGenRequest,
    "CropRequest": CropRequest,
    "CodeRequest": CodeRequest,
    "GenerationResponse": GenerationResponseModel,
    "Project": ProjectModel,
    "Categories": CategoriesModel,
    "Job": JobModel,
    "Replay": ReplayModel,
}


def _png_bytes(image: np.ndarray) -> bytes:
    buf = io.BytesIO()
    from PIL import Image

    Image.fromarray(image, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def _file_id(path: str | Path) -> str:
    return sha256(Path(path).read_bytes()).hexdigest()[:16]


def _parse_condition(components) -> ComponentCondition:
    try:
        if isinstance(components, str):
            condition = ComponentCondition.from_string(components)
        else:
            condition = ComponentCondition.of(components)
    except (KeyError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=f"invalid components: {exc}")
    if condition.total > DEFAULT_E_MAX:
        raise HTTPException(
            status_code=400,
            detail=f"condition lists {condition.total} components, e_max={DEFAULT_E_MAX}",
        )
    return condition


def create_app(
    store_root: str | Path | None = None,
    layout_ckpt: str | Path | None = None,
    ui_ckpt: str | Path | None = None,
    workers: int = 1,
    capacity: int = 8,
    frontend_dir: str | Path | None = None,
) -> FastAPI:
    import os

    root = Path(store_root or os.environ.get("UIDIFF_STORE", "./store"))
    app = FastAPI(title="uidiff service", version="0.1.0")
    state = app.state
    state.store = ProjectStore(root)
    state.jobs = JobQueue(workers=workers, capacity=capacity)
    state.layout_model = None
    state.layout_schedule = None
    state.ui_components = None
    state.checkpoint_ids = {}

    if layout_ckpt is not None:
        state.layout_model, state.layout_schedule = load_layout_checkpoint(layout_ckpt)
        state.checkpoint_ids["layout"] = _file_id(layout_ckpt)
    if ui_ckpt is not None:
        state.ui_components = load_ui_checkpoint(ui_ckpt)
        state.checkpoint_ids["ui"] = _file_id(ui_ckpt)

    # ---- pure generation bodies (run inside the job queue) ----------------

    def do_generate_layouts(request: dict) -> StoredResult:
        condition = ComponentCondition.of(request["components"]) if request["components"] else None
        artifacts: list[dict] = []
        entries = []
        started = time.monotonic()
        for i in range(request["n_layouts"]):
            layout = sample_layout(
                state.layout_model,
                state.layout_schedule,
                condition,
                np.random.default_rng(request["seed"] + i),
            )
            wireframe = render_wireframe(layout, DEFAULT_PALETTE)
            layout_ref = state.store.put_artifact(
                layout_to_json(layout).encode(), ".json", role="layout"
            )
            wf_ref = state.store.put_artifact(_png_bytes(wireframe), ".png", role="wireframe")
            artifacts += [layout_ref.to_dict(), wf_ref.to_dict()]
            entries.append(
                {
                    "seed": request["seed"] + i,
                    "layout_hash": layout_ref.hash,
                    "layout_url": f"/api/artifacts/{layout_ref.hash}",
                    "wireframe_url": f"/api/artifacts/{wf_ref.hash}",
                    "layout": json.loads(layout_to_json(layout)),
                    "metrics": layout_metrics(layout),
                }
            )
        return StoredResult(
            id="",
            kind="layouts",
            request=request,
            artifacts=artifacts,
            timings={"seconds": time.monotonic() - started},
            checkpoint_ids={"layout": state.checkpoint_ids.get("layout", "")},
        ), entries

    def do_generate_uis(request: dict) -> StoredResult:
        layout = layout_from_json(state.store.get_artifact(request["layout_hash"]).decode())
        artifacts: list[dict] = []
        entries = []
        started = time.monotonic()
        for i in range(request["n_uis_per_layout"]):
            image = generate_ui(
                state.ui_components,
                request["prompt"],
                layout,
                seed=request["seed"] + i,
                steps=request["steps"],
            )
            ref = state.store.put_artifact(_png_bytes(image), ".png", role="ui")
            artifacts.append(ref.to_dict())
            entries.append(
                {"seed": request["seed"] + i, "ui_url": f"/api/artifacts/{ref.hash}",
                 "ui_hash": ref.hash}
            )
        return StoredResult(
            id="",
            kind="uis",
            request=request,
            artifacts=artifacts,
            timings={"seconds": time.monotonic() - started},
            checkpoint_ids={"ui": state.checkpoint_ids.get("ui", "")},
        ), {"images": entries, "metrics": layout_metrics(layout)}

    def do_crops(request: dict) -> StoredResult:
        layout = layout_from_json(state.store.get_artifact(request["layout_hash"]).decode())
        ui_bytes = state.store.get_artifact(request["ui_hash"])
        from PIL import Image

        ui = np.asarray(Image.open(io.BytesIO(ui_bytes)).convert("RGB"))
        crops = crop_components(ui, layout)
        artifacts = []
        entries = []
        for crop in crops:
            ref = state.store.put_artifact(_png_bytes(crop.image), ".png", role="crop")
            artifacts.append(ref.to_dict())
            entries.append(
                {
                    "category": crop.category.name,
                    "rect": list(crop.rect),
                    "occluded_fraction": crop.occluded_fraction,
                    "fill_color": list(crop.fill_color) if crop.fill_color else None,
                    "fully_occluded": crop.fully_occluded,
                    "crop_url": f"/api/artifacts/{ref.hash}",
                }
            )
        return StoredResult(
            id="", kind="crops", request=request, artifacts=artifacts
        ), entries

    def do_code(request: dict) -> StoredResult:
        layout = layout_from_json(state.store.get_artifact(request["layout_hash"]).decode())
        ui = None
        if request.get("ui_hash"):
            from PIL import Image

            ui = np.asarray(
                Image.open(io.BytesIO(state.store.get_artifact(request["ui_hash"]))).convert("RGB")
            )
        doc = generate_code(layout, ui)
        if request["format"] == "xml":
            text, ext = emit_xml(doc), ".xml"
        else:
            text, ext = emit_html(doc), ".html"
        ref = state.store.put_artifact(text.encode(), ext, role="code")
        return StoredResult(id="", kind="code", request=request, artifacts=[ref.to_dict()]), {
            "code_url": f"/api/artifacts/{ref.hash}",
            "format": request["format"],
            "nodes": len(doc.nodes),
        }

    GENERATORS = {
        "layouts": do_generate_layouts,
        "uis": do_generate_uis,
        "crops": do_crops,
        "code": do_code,
    }

    def run_result_job(project_id: str, kind: str, request: dict, mode: str):
        def job():
            result, payload = GENERATORS[kind](request)
            result.id = sha256(
                json.dumps([kind, request], sort_keys=True).encode()
            ).hexdigest()[:12] + f"-{len(state.store.get_project(project_id)['results'])}"
            state.store.add_result(project_id, result)
            return {"result_id": result.id, "kind": kind, "data": payload,
                    "timings": result.timings, "checkpoint_ids": result.checkpoint_ids}

        try:
            if mode == "async":
                job_id = state.jobs.submit(job)
                return {"job_id": job_id, "state": "queued"}
            return state.jobs.run_sync(job)
        except QueueFull as exc:
            raise HTTPException(status_code=429, detail=str(exc))

    # ---- routes ------------------------------------------------------------

    @app.post("/api/projects", status_code=201)
    def create_project(body: ProjectCreate):
        return state.store.create_project(body.name)

    @app.get("/api/projects")
    def list_projects():
        return state.store.list_projects()

    @app.get("/api/projects/{project_id}")
    def get_project(project_id: str):
        try:
            return state.store.get_project(project_id)
        except NotFound:
            raise HTTPException(status_code=404, detail=f"project {project_id}")

    @app.delete("/api/projects/{project_id}", status_code=204)
    def delete_project(project_id: str):
        try:
            state.store.delete_project(project_id)
        except NotFound:
            raise HTTPException(status_code=404, detail=f"project {project_id}")

    @app.post("/api/projects/{project_id}/layouts")
    def generate_layouts(
        project_id: str, body: LayoutGenRequest, mode: str = Query("sync")
    ):
        get_project(project_id)
        if state.layout_model is None:
            raise HTTPException(status_code=503, detail="layout checkpoint not loaded")
        condition = _parse_condition(body.components)
        request = {
            "prompt": body.prompt,
            "components": condition.to_dict(),
            "seed": body.seed,
            "n_layouts": body.n_layouts,
        }
        return run_result_job(project_id, "layouts", request, mode)

    @app.post("/api/projects/{project_id}/uis")
    def generate_uis(project_id: str, body: UiGenRequest, mode: str = Query("sync")):
        get_project(project_id)
        if state.ui_components is None:
            raise HTTPException(status_code=503, detail="ui checkpoint not loaded")
        try:
            state.store.artifact_path(body.layout_hash)
        except NotFound:
            raise HTTPException(status_code=404, detail=f"layout {body.layout_hash}")
        request = {
            "layout_hash": body.layout_hash,
            "prompt": body.prompt,
            "seed": body.seed,
            "n_uis_per_layout": body.n_uis_per_layout,
            "steps": body.steps,
        }
        return run_result_job(project_id, "uis", request, mode)

    @app.post("/api/projects/{project_id}/crops")
    def make_crops(project_id: str, body: CropRequest, mode: str = Query("sync")):
        get_project(project_id)
        for digest in (body.ui_hash, body.layout_hash):
            try:
                state.store.artifact_path(digest)
            except NotFound:
                raise HTTPException(status_code=404, detail=f"artifact {digest}")
        return run_result_job(project_id, "crops", body.model_dump(), mode)

    @app.post("/api/projects/{project_id}/code")
    def make_code(project_id: str, body: CodeRequest, mode: str = Query("sync")):
        get_project(project_id)
        try:
            state.store.artifact_path(body.layout_hash)
        except NotFound:
            raise HTTPException(status_code=404, detail=f"layout {body.layout_hash}")
        return run_result_job(project_id, "code", body.model_dump(), mode)

    @app.post("/api/projects/{project_id}/replay/{result_id}")
    def replay(project_id: str, result_id: str):
        try:
            stored = state.store.get_result(project_id, result_id)
        except NotFound:
            raise HTTPException(status_code=404, detail=f"result {result_id}")
        if stored["kind"] in ("layouts",) and state.layout_model is None:
            raise HTTPException(status_code=503, detail="layout checkpoint not loaded")
        if stored["kind"] in ("uis",) and state.ui_components is None:
            raise HTTPException(status_code=503, detail="ui checkpoint not loaded")

        def job():
            result, _ = GENERATORS[stored["kind"]](stored["request"])
            old = [a["hash"] for a in stored["artifacts"]]
            new = [a["hash"] for a in result.artifacts]
            return {
                "reproducible": old == new,
                "stored": old,
                "regenerated": new,
            }

        try:
            return state.jobs.run_sync(job)
        except QueueFull as exc:
            raise HTTPException(status_code=429, detail=str(exc))

    @app.get("/api/jobs/{job_id}")
    def job_status(job_id: str):
        try:
            job = state.jobs.status(job_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"job {job_id}")
        return {"job_id": job.id, "state": job.state, "result": job.result, "error": job.error}

    @app.get("/api/artifacts/{digest}")
    def get_artifact(digest: str):
        try:
            path = state.store.artifact_path(digest)
        except NotFound:
            raise HTTPException(status_code=404, detail=f"artifact {digest}")
        return FileResponse(path, media_type=MEDIA_TYPES.get(path.suffix, "application/octet-stream"))

    @app.get("/api/categories")
    def categories():
        return {
            "palette_version": DEFAULT_PALETTE.version,
            "background": "#{:02x}{:02x}{:02x}".format(*DEFAULT_PALETTE.background),
            "e_max": DEFAULT_E_MAX,
            "categories": [
                {
                    "id": cat.id,
                    "name": cat.name,
                    "color": "#{:02x}{:02x}{:02x}".format(*DEFAULT_PALETTE.color_of(cat)),
                }
                for cat in CATEGORIES
            ],
        }

    @app.get("/api/schemas")
    def schemas():
        return {name: model.model_json_schema() for name, model in SCHEMA_MODELS.items()}

    @app.get("/api/health")
    def health():
        return {
            "status": "ok",
            "layout_checkpoint": state.checkpoint_ids.get("layout"),
            "ui_checkpoint": state.checkpoint_ids.get("ui"),
        }

    if frontend_dir is not None and Path(frontend_dir).exists():
        app.mount("/app", StaticFiles(directory=frontend_dir, html=True), name="app")

    return app
