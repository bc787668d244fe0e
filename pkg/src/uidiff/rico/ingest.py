"""Dataset ingestion: Rico-convention directories to fine-tuning manifests.

Directory convention: <root>/combined/<id>.jpg (screenshot),
<root>/semantic/<id>.png (wireframe), <root>/hierarchies/<id>.json.

Preprocessing drops landscape records and resizes survivors to exactly
288x512 (bilinear for screenshots, nearest-neighbor for wireframes so flat
category colors stay palette-decodable). Conditioning wireframes are
re-rendered from the parsed hierarchy with the artifact palette whenever a
hierarchy is available, keeping training and inference conventions identical.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..core import Layout, layout_from_dict, layout_to_dict
from ..wireframe import DEFAULT_PALETTE, Palette, render_wireframe, save_png
from .captions import DEFAULT_TEMPLATES, CaptionTemplateSet, generate_caption
from .hierarchy import parse_hierarchy

log = logging.getLogger(__name__)

TARGET_SIZE = (288, 512)  # (width, height)


class CorruptImage(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class IOFailure(OSError):
    pass


@dataclass(frozen=True)
class RicoRecord:
    id: str
    screenshot: Path
    wireframe: Path
    hierarchy: dict | None = None


@dataclass(frozen=True)
class Rejected:
    record_id: str
    reason: str


@dataclass
class TrainingRecord:
    image: np.ndarray  # uint8 (512, 288, 3)
    conditioning: np.ndarray  # uint8 (512, 288, 3)
    caption: str
    source_id: str
    layout: Layout | None = None

    def __post_init__(self):
        expected = (TARGET_SIZE[1], TARGET_SIZE[0], 3)
        for name, img in (("image", self.image), ("conditioning", self.conditioning)):
            if img.shape != expected:
                raise ValueError(f"{name} must be {expected}, got {img.shape}")
        if not self.caption:
            raise ValueError("caption must be non-empty")


def scan_rico_root(root: str | Path) -> list[RicoRecord]:
    """Collect records following the Rico directory convention."""
    root = Path(root)
    records = []
    for shot in sorted((root / "combined").glob("*.jpg")):
        rec_id = shot.stem
        wf = root / "semantic" / f"{rec_id}.png"
        hierarchy_path = root / "hierarchies" / f"{rec_id}.json"
        if not wf.exists():
            log.warning("record %s has no wireframe, skipped", rec_id)
            continue
        hierarchy = None
        if hierarchy_path.exists():
            hierarchy = json.loads(hierarchy_path.read_text())
        records.append(RicoRecord(rec_id, shot, wf, hierarchy))
    return records


def _load_rgb(path: Path) -> Image.Image:
    try:
        img = Image.open(path)
        img.load()
    except (OSError, UnidentifiedImageError) as exc:
        raise CorruptImage(f"cannot read {path}: {exc}") from exc
    return img.convert("RGB")


def preprocess_record(
    rec: RicoRecord,
    templates: CaptionTemplateSet = DEFAULT_TEMPLATES,
    seed: int = 0,
    palette: Palette = DEFAULT_PALETTE,
    rerender_conditioning: bool = True,
) -> TrainingRecord | Rejected:
    """Turn one raw record into a TrainingRecord, or reject it.

    Landscape sources (width > height) are rejected. Screenshot and wireframe
    aspect ratios must agree.
    """
    shot = _load_rgb(rec.screenshot)
    wf = _load_rgb(rec.wireframe)

    if shot.width > shot.height:
        return Rejected(rec.id, "landscape")
    if abs(shot.width / shot.height - wf.width / wf.height) > 0.02:
        raise DimensionMismatch(
            f"record {rec.id}: screenshot {shot.size} vs wireframe {wf.size}"
        )

    image = np.asarray(shot.resize(TARGET_SIZE, Image.BILINEAR))

    layout = None
    if rec.hierarchy is not None:
        layout = parse_hierarchy(rec.hierarchy, canvas=TARGET_SIZE)

    if rerender_conditioning and layout is not None:
        conditioning = render_wireframe(layout, palette, size=TARGET_SIZE)
    else:
        conditioning = np.asarray(wf.resize(TARGET_SIZE, Image.NEAREST))

    caption = generate_caption(
        rec.id, layout if layout is not None else Layout(*TARGET_SIZE, ()), templates, seed
    )
    return TrainingRecord(image, conditioning, caption, rec.id, layout)


@dataclass
class DatasetStats:
    kept: int = 0
    rejected: Counter = field(default_factory=Counter)
    category_histogram: Counter = field(default_factory=Counter)

    def to_dict(self) -> dict:
        return {
            "kept": self.kept,
            "rejected": dict(self.rejected),
            "category_histogram": dict(self.category_histogram),
        }


@dataclass(frozen=True)
class IngestConfig:
    out_dir: Path
    seed: int = 0
    templates: CaptionTemplateSet = DEFAULT_TEMPLATES
    palette: Palette = DEFAULT_PALETTE


def build_training_set(records: list[RicoRecord], cfg: IngestConfig) -> tuple[Path, DatasetStats]:
    """Preprocess records, write images and manifest.jsonl, return stats.

    Manifest lines carry {image, conditioning, caption, source_id} plus the
    parsed layout (used by layout-model training).
    """
    out = Path(cfg.out_dir)
    stats = DatasetStats()
    try:
        (out / "images" / "screens").mkdir(parents=True, exist_ok=True)
        (out / "images" / "wireframes").mkdir(parents=True, exist_ok=True)
        manifest_path = out / "manifest.jsonl"
        with manifest_path.open("w") as manifest:
            for rec in records:
                result = preprocess_record(
                    rec, templates=cfg.templates, seed=cfg.seed, palette=cfg.palette
                )
                if isinstance(result, Rejected):
                    stats.rejected[result.reason] += 1
                    continue
                image_rel = f"images/screens/{result.source_id}.png"
                cond_rel = f"images/wireframes/{result.source_id}.png"
                save_png(result.image, out / image_rel)
                save_png(result.conditioning, out / cond_rel)
                line = {
                    "image": image_rel,
                    "conditioning": cond_rel,
                    "caption": result.caption,
                    "source_id": result.source_id,
                }
                if result.layout is not None:
                    line["layout"] = layout_to_dict(result.layout)
                    for el in result.layout.elements:
                        stats.category_histogram[el.category.name] += 1
                manifest.write(json.dumps(line) + "\n")
                stats.kept += 1
        (out / "stats.json").write_text(json.dumps(stats.to_dict(), indent=2))
    except OSError as exc:
        raise IOFailure(f"writing dataset under {out}: {exc}") from exc
    if stats.kept == 0:
        log.warning("empty training set written to %s", out)
    return manifest_path, stats


@dataclass(frozen=True)
class ManifestEntry:
    image: Path
    conditioning: Path
    caption: str
    source_id: str
    layout: Layout | None


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    path = Path(path)
    base = path.parent
    entries = []
    for line in path.read_text().splitlines():
        if not line.strip():
            continue
        data = json.loads(line)
        entries.append(
            ManifestEntry(
                image=base / data["image"],
                conditioning=base / data["conditioning"],
                caption=data["caption"],
                source_id=data["source_id"],
                layout=layout_from_dict(data["layout"]) if "layout" in data else None,
            )
        )
    return entries
