"""Project persistence: content-addressed artifacts + atomic JSON metadata.

Artifacts are written first under their content hash; project metadata is
written last via write-new-then-rename, so a crash in between can orphan an
artifact file but never produce metadata that points at missing data.
Deleting a project garbage-collects artifacts not referenced elsewhere.
"""

from __future__ import annotations

import json
import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from hashlib import sha256
from pathlib import Path


class NotFound(KeyError):
    pass


class StorageFull(OSError):
    pass


MEDIA_TYPES = {
    ".png": "image/png",
    ".json": "application/json",
    ".html": "text/html",
    ".xml": "application/xml",
    ".txt": "text/plain",
}


@dataclass
class ArtifactRef:
    hash: str
    ext: str
    role: str

    def to_dict(self) -> dict:
        return {"hash": self.hash, "ext": self.ext, "role": self.role}


@dataclass
class StoredResult:
    id: str
    kind: str
    request: dict
    artifacts: list[dict]
    timings: dict = field(default_factory=dict)
    checkpoint_ids: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "request": self.request,
            "artifacts": self.artifacts,
            "timings": self.timings,
            "checkpoint_ids": self.checkpoint_ids,
        }


class ProjectStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        (self.root / "artifacts").mkdir(parents=True, exist_ok=True)
        (self.root / "projects").mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    # -- artifacts ---------------------------------------------------------

    def put_artifact(self, data: bytes, ext: str, role: str = "artifact") -> ArtifactRef:
        digest = sha256(data).hexdigest()
        path = self.root / "artifacts" / f"{digest}{ext}"
        if not path.exists():
            tmp = path.with_suffix(path.suffix + f".tmp{os.getpid()}")
            try:
                tmp.write_bytes(data)
                os.replace(tmp, path)
            except OSError as exc:
                raise StorageFull(f"cannot write artifact: {exc}") from exc
        return ArtifactRef(digest, ext, role)

    def artifact_path(self, digest: str) -> Path:
        matches = list((self.root / "artifacts").glob(f"{digest}.*"))
        if not matches:
            raise NotFound(f"artifact {digest}")
        return matches[0]

    def get_artifact(self, digest: str) -> bytes:
        return self.artifact_path(digest).read_bytes()

    # -- projects ----------------------------------------------------------

    def _project_path(self, project_id: str) -> Path:
        return self.root / "projects" / f"{project_id}.json"

    def _write_project(self, meta: dict) -> None:
        path = self._project_path(meta["id"])
        tmp = path.with_suffix(f".tmp{os.getpid()}.{threading.get_ident()}")
        tmp.write_text(json.dumps(meta, indent=2))
        os.replace(tmp, path)

    def create_project(self, name: str) -> dict:
        meta = {
            "id": uuid.uuid4().hex,
            "name": name,
            "created_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "results": [],
        }
        with self._lock:
            self._write_project(meta)
        return meta

    def get_project(self, project_id: str) -> dict:
        path = self._project_path(project_id)
        if not path.exists():
            raise NotFound(f"project {project_id}")
        return json.loads(path.read_text())

    def list_projects(self) -> list[dict]:
        out = []
        for path in sorted((self.root / "projects").glob("*.json")):
            out.append(json.loads(path.read_text()))
        return out

    def add_result(self, project_id: str, result: StoredResult) -> dict:
        with self._lock:
            meta = self.get_project(project_id)
            meta["results"].append(result.to_dict())
            self._write_project(meta)
        return meta

    def get_result(self, project_id: str, result_id: str) -> dict:
        meta = self.get_project(project_id)
        for result in meta["results"]:
            if result["id"] == result_id:
                return result
        raise NotFound(f"result {result_id} in project {project_id}")

    def delete_project(self, project_id: str) -> None:
        with self._lock:
            meta = self.get_project(project_id)
            os.remove(self._project_path(project_id))
            # Refcount: keep artifacts referenced by any surviving project.
            still_referenced = {
                a["hash"]
                for other in self.list_projects()
                for result in other["results"]
                for a in result["artifacts"]
            }
            for result in meta["results"]:
                for a in result["artifacts"]:
                    if a["hash"] not in still_referenced:
                        try:
                            os.remove(self.artifact_path(a["hash"]))
                        except NotFound:
                            pass
