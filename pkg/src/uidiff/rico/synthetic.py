"""Procedural fake-app generator for desk-scale training.

Emits records in the Rico directory convention (combined/, semantic/,
hierarchies/) so the ingestion pipeline treats synthetic and real data
identically. Screens are archetype-based (list, login, gallery, media,
profile, form) with jittered geometry, rendered as flat-styled mock
screenshots plus matching wireframes and hierarchies.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from PIL import Image

from ..core import BBox, Layout, category_by_name
from ..wireframe import DEFAULT_PALETTE, render_wireframe

SOURCE_SIZES = ((540, 960), (1080, 1920))

ARCHETYPES = ("list", "login", "gallery", "media", "profile", "form")


def _el(name: str, x: float, y: float, w: float, h: float, rng) -> tuple:
    jx = float(rng.uniform(-0.01, 0.01))
    jy = float(rng.uniform(-0.01, 0.01))
    x = min(max(x + jx, 0.0), 0.98)
    y = min(max(y + jy, 0.0), 0.98)
    w = min(w, 1.0 - x)
    h = min(h, 1.0 - y)
    return (category_by_name(name), BBox(x, y, w, h))


def sample_synthetic_layout(rng: np.random.Generator, canvas=(288, 512)) -> Layout:
    """Draw one archetypal app layout with jittered geometry."""
    archetype = ARCHETYPES[int(rng.integers(len(ARCHETYPES)))]
    items = []
    if archetype == "list":
        items.append(_el("toolbar", 0.0, 0.0, 1.0, 0.08, rng))
        n = int(rng.integers(3, 7))
        row_h = float(rng.uniform(0.09, 0.12))
        y = 0.1
        for _ in range(n):
            items.append(_el("list item", 0.0, y, 1.0, row_h, rng))
            y += row_h + 0.015
        if rng.random() < 0.5:
            items.append(_el("bottom navigation", 0.0, 0.92, 1.0, 0.08, rng))
    elif archetype == "login":
        items.append(_el("text", 0.2, 0.12, 0.6, 0.07, rng))
        items.append(_el("input", 0.12, 0.32, 0.76, 0.06, rng))
        items.append(_el("input", 0.12, 0.42, 0.76, 0.06, rng))
        items.append(_el("text button", 0.25, 0.56, 0.5, 0.07, rng))
        if rng.random() < 0.5:
            items.append(_el("text", 0.3, 0.68, 0.4, 0.04, rng))
    elif archetype == "gallery":
        items.append(_el("toolbar", 0.0, 0.0, 1.0, 0.08, rng))
        for row in range(3):
            for col in range(2):
                items.append(
                    _el("image", 0.04 + col * 0.49, 0.12 + row * 0.24, 0.43, 0.2, rng)
                )
    elif archetype == "media":
        items.append(_el("toolbar", 0.0, 0.0, 1.0, 0.08, rng))
        items.append(_el("image", 0.05, 0.12, 0.9, 0.4, rng))
        items.append(_el("text", 0.1, 0.56, 0.8, 0.05, rng))
        items.append(_el("slider", 0.1, 0.66, 0.8, 0.03, rng))
        for i in range(int(rng.integers(3, 6))):
            items.append(_el("icon", 0.12 + i * 0.16, 0.76, 0.1, 0.06, rng))
    elif archetype == "profile":
        items.append(_el("background image", 0.0, 0.0, 1.0, 0.35, rng))
        items.append(_el("image", 0.35, 0.26, 0.3, 0.17, rng))
        items.append(_el("text", 0.25, 0.48, 0.5, 0.05, rng))
        items.append(_el("text button", 0.3, 0.58, 0.4, 0.06, rng))
        if rng.random() < 0.4:
            items.append(_el("advertisement", 0.0, 0.88, 1.0, 0.12, rng))
    else:  # form
        items.append(_el("toolbar", 0.0, 0.0, 1.0, 0.08, rng))
        items.append(_el("text", 0.08, 0.12, 0.6, 0.05, rng))
        y = 0.22
        for _ in range(int(rng.integers(2, 4))):
            items.append(_el("input", 0.08, y, 0.84, 0.06, rng))
            y += 0.1
        items.append(_el("checkbox", 0.08, y, 0.08, 0.04, rng))
        items.append(_el("text button", 0.25, y + 0.1, 0.5, 0.07, rng))
    return Layout.from_boxes(items[:20], canvas)


def _fill(region: np.ndarray, color) -> None:
    region[:, :] = color


def _hstripes(region: np.ndarray, color, rng) -> None:
    h = region.shape[0]
    n = max(1, min(3, h // 12))
    for i in range(n):
        top = int(h * (i + 0.25) / n)
        bottom = min(top + max(2, h // (n * 4)), h)
        width = int(region.shape[1] * float(rng.uniform(0.5, 0.95)))
        region[top:bottom, : max(width, 1)] = color


def render_fake_screenshot(
    layout: Layout, size: tuple[int, int], rng: np.random.Generator
) -> np.ndarray:
    """Flat-styled mock screenshot aligned with the layout's rectangles."""
    w, h = size
    img = np.empty((h, w, 3), dtype=np.uint8)
    img[:, :] = rng.integers(238, 252, size=3)
    accent = np.array(
        [rng.integers(30, 120), rng.integers(80, 180), rng.integers(140, 230)]
    )[rng.permutation(3)].astype(np.uint8)
    dark = np.array([60, 60, 68], dtype=np.uint8)

    for el in layout.elements:
        left = int(el.bbox.x * w)
        top = int(el.bbox.y * h)
        right = max(int(el.bbox.x2 * w), left + 1)
        bottom = max(int(el.bbox.y2 * h), top + 1)
        region = img[top:bottom, left:right]
        name = el.category.name
        if name in ("toolbar", "bottom navigation", "button bar", "multi-tab"):
            _fill(region, accent)
        elif name in ("text", "checkbox", "radio button"):
            _hstripes(region, dark, rng)
        elif name == "text button":
            _fill(region, accent)
            inner = region[region.shape[0] // 3 : 2 * region.shape[0] // 3,
                           region.shape[1] // 4 : 3 * region.shape[1] // 4]
            _fill(inner, np.minimum(accent.astype(int) + 70, 255).astype(np.uint8))
        elif name in ("image", "background image", "video", "map view", "web view",
                      "advertisement", "card", "modal", "drawer"):
            tint = ((accent.astype(int) + rng.integers(0, 80, size=3)) % 256).astype(np.uint8)
            _fill(region, tint)
            half_h, half_w = region.shape[0] // 2, region.shape[1] // 2
            region[:half_h, :half_w] = np.minimum(tint.astype(int) + 30, 255).astype(np.uint8)
            region[half_h:, half_w:] = np.maximum(tint.astype(int) - 30, 0).astype(np.uint8)
        elif name == "input":
            _fill(region, (250, 250, 250))
            region[-max(2, region.shape[0] // 10):, :] = dark
        elif name == "list item":
            _fill(region, (246, 246, 248))
            square = min(region.shape[0] - 2, region.shape[1] // 6)
            if square > 0:
                region[1 : 1 + square, 2 : 2 + square] = accent
            _hstripes(region[:, square + 6 :], dark, rng)
        else:  # icons and small controls
            _fill(region, dark)
    return img


def generate_synthetic_dataset(
    root: str | Path,
    n_portrait: int,
    n_landscape: int = 0,
    seed: int = 0,
) -> list[str]:
    """Write a Rico-convention synthetic dataset; returns the record ids."""
    root = Path(root)
    rng = np.random.default_rng(seed)
    for sub in ("combined", "semantic", "hierarchies"):
        (root / sub).mkdir(parents=True, exist_ok=True)

    ids = []
    for i in range(n_portrait + n_landscape):
        landscape = i >= n_portrait
        rec_id = f"synth{i:05d}"
        layout = sample_synthetic_layout(rng)
        src_w, src_h = SOURCE_SIZES[int(rng.integers(len(SOURCE_SIZES)))]
        if landscape:
            src_w, src_h = src_h, src_w

        shot = render_fake_screenshot(layout, (src_w, src_h), rng)
        Image.fromarray(shot).save(root / "combined" / f"{rec_id}.jpg", quality=92)

        wf = render_wireframe(layout, DEFAULT_PALETTE, size=(src_w, src_h))
        Image.fromarray(wf).save(root / "semantic" / f"{rec_id}.png")

        children = [
            {
                "componentLabel": el.category.name.title(),
                "bounds": [
                    int(el.bbox.x * src_w),
                    int(el.bbox.y * src_h),
                    int(el.bbox.x2 * src_w),
                    int(el.bbox.y2 * src_h),
                ],
            }
            for el in layout.elements
        ]
        hierarchy = {"bounds": [0, 0, src_w, src_h], "children": children}
        (root / "hierarchies" / f"{rec_id}.json").write_text(json.dumps(hierarchy))
        ids.append(rec_id)
    return ids
