"""Flat-color wireframe rendering of layouts.

A wireframe is the conditioning image for UI generation: the canvas filled
with the background color, then one solid rectangle per element painted in
z order. Colors come from a fixed, versioned palette so the same convention
holds for training images re-rendered from hierarchies and for inference
images rendered from generated layouts. Rendering is bit-deterministic; no
anti-aliasing, so sampling a rectangle's interior recovers its category.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .core import CATEGORIES, ComponentCategory, Layout, require_valid, round_half_up

PALETTE_VERSION = "v1"

RGB = tuple[int, int, int]

# 25 visually separated colors; pairwise distinct and distinct from the
# white background (palette decoding relies on exact triples).
_COLOR_TABLE: tuple[RGB, ...] = (
    (230, 25, 75),    # text
    (60, 180, 75),    # text button
    (255, 225, 25),   # icon
    (0, 130, 200),    # image
    (245, 130, 48),   # toolbar
    (145, 30, 180),   # list item
    (70, 240, 240),   # input
    (240, 50, 230),   # background image
    (210, 245, 60),   # card
    (250, 190, 212),  # web view
    (0, 128, 128),    # radio button
    (220, 190, 255),  # drawer
    (170, 110, 40),   # checkbox
    (255, 250, 200),  # advertisement
    (128, 0, 0),      # modal
    (170, 255, 195),  # pager indicator
    (128, 128, 0),    # slider
    (255, 215, 180),  # on/off switch
    (0, 0, 128),      # button bar
    (128, 128, 128),  # number stepper
    (0, 0, 0),        # multi-tab
    (0, 200, 140),    # date picker
    (90, 60, 140),    # map view
    (140, 20, 60),    # video
    (40, 40, 40),     # bottom navigation
)


@dataclass(frozen=True)
class Palette:
    """Total mapping from the 25 categories to RGB, plus a background color."""

    colors: tuple[RGB, ...] = _COLOR_TABLE
    background: RGB = (255, 255, 255)
    version: str = PALETTE_VERSION
    _by_color: dict = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        if len(self.colors) != len(CATEGORIES):
            raise ValueError("palette must cover all categories")
        all_colors = (*self.colors, self.background)
        if len(set(all_colors)) != len(all_colors):
            raise ValueError("palette colors must be pairwise distinct")
        object.__setattr__(
            self, "_by_color", {c: CATEGORIES[i] for i, c in enumerate(self.colors)}
        )

    def color_of(self, category: ComponentCategory) -> RGB:
        return self.colors[category.id]

    def category_for_color(self, color: RGB) -> ComponentCategory | None:
        return self._by_color.get(tuple(color))

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "background": _hex(self.background),
            "categories": {
                CATEGORIES[i].name: _hex(c) for i, c in enumerate(self.colors)
            },
        }

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2))


def _hex(color: RGB) -> str:
    return "#{:02x}{:02x}{:02x}".format(*color)


DEFAULT_PALETTE = Palette()


def render_wireframe(
    layout: Layout,
    palette: Palette = DEFAULT_PALETTE,
    size: tuple[int, int] | None = None,
) -> np.ndarray:
    """Render a layout to an RGB uint8 array of shape (height, width, 3).

    size is (width, height); defaults to the layout canvas. Elements are
    painted bottom-up, so later (higher z) elements overwrite earlier ones.
    """
    require_valid(layout, e_max=max(len(layout.elements), 20))
    w, h = size if size is not None else (layout.canvas_w, layout.canvas_h)
    img = np.empty((h, w, 3), dtype=np.uint8)
    img[:, :] = palette.background
    for el in layout.elements:
        left = round_half_up(el.bbox.x * w)
        top = round_half_up(el.bbox.y * h)
        right = round_half_up(el.bbox.x2 * w)
        bottom = round_half_up(el.bbox.y2 * h)
        img[top:bottom, left:right] = palette.color_of(el.category)
    return img


def decode_category_at(
    img: np.ndarray, x: int, y: int, palette: Palette = DEFAULT_PALETTE
) -> ComponentCategory | None:
    """Palette-decode the pixel at (x, y); None for background or unknown colors."""
    return palette.category_for_color(tuple(int(v) for v in img[y, x]))


def save_png(img: np.ndarray, path: str | Path) -> None:
    Image.fromarray(img, mode="RGB").save(path, format="PNG")


def load_png(path: str | Path) -> np.ndarray:
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"))
