"""Crop reusable components out of a generated UI image.

Each element's pixel rect is cut from the UI using the layout's absolute
positions. Where a higher-stacked element's rect occludes a lower one, the
occluded pixels are repaired with the modal color of the lower component's
visible pixels (32-level channel histogram, ties to the lowest quantized
RGB tuple, reported as that bin's mean true color).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..core import ComponentCategory, Layout, round_half_up

log = logging.getLogger(__name__)

QUANT_LEVELS = 32
_QUANT_STEP = 256 // QUANT_LEVELS


class EmptyRegion(ValueError):
    pass


class CanvasMismatch(ValueError):
    pass


def dominant_fill_color(region: np.ndarray) -> tuple[int, int, int]:
    """Modal color of a pixel region after 32-level channel quantization.

    Accepts (H, W, 3) or (N, 3) uint8 arrays. Ties break toward the lowest
    quantized (R, G, B) tuple; the returned color is the winning bin's mean
    true color.
    """
    pixels = region.reshape(-1, 3)
    if pixels.size == 0:
        raise EmptyRegion("region has no pixels")
    quantized = pixels // _QUANT_STEP
    bins, inverse, counts = np.unique(
        quantized, axis=0, return_inverse=True, return_counts=True
    )
    # np.unique sorts lexicographically, so among equal counts the first
    # argmax is already the lowest (R, G, B) tuple.
    winner = int(np.argmax(counts))
    mean = pixels[inverse == winner].mean(axis=0)
    return tuple(int(round_half_up(v)) for v in mean)


@dataclass
class CroppedComponent:
    category: ComponentCategory
    rect: tuple[int, int, int, int]  # (left, top, right, bottom) pixels
    image: np.ndarray
    fill_color: tuple[int, int, int] | None
    occluded_fraction: float
    fully_occluded: bool = False

    @property
    def width(self) -> int:
        return self.rect[2] - self.rect[0]

    @property
    def height(self) -> int:
        return self.rect[3] - self.rect[1]


def crop_components(ui: np.ndarray, layout: Layout) -> list[CroppedComponent]:
    """Cut one crop per element, top of the stack first, healing occlusions.

    Output order matches the layout's element order (z ascending).
    """
    expected = (layout.canvas_h, layout.canvas_w, 3)
    if ui.shape != expected:
        raise CanvasMismatch(f"ui shape {ui.shape} does not match canvas {expected}")

    rects = [el.bbox.to_pixels(layout.canvas_w, layout.canvas_h) for el in layout.elements]
    covered = np.zeros(ui.shape[:2], dtype=bool)
    out: list[CroppedComponent | None] = [None] * len(layout.elements)

    for el in reversed(layout.elements):  # top of stack first
        left, top, right, bottom = rects[el.z]
        crop = ui[top:bottom, left:right].copy()
        occluded = covered[top:bottom, left:right]
        n_pixels = crop.shape[0] * crop.shape[1]
        fraction = float(occluded.mean()) if n_pixels else 0.0

        fill = None
        fully = False
        if fraction > 0:
            visible = crop[~occluded]
            if visible.size == 0:
                fill = dominant_fill_color(crop)
                fully = True
                log.warning(
                    "element %d (%s) fully occluded; filled from its whole rect",
                    el.z,
                    el.category.name,
                )
            else:
                fill = dominant_fill_color(visible)
            crop[occluded] = fill

        out[el.z] = CroppedComponent(
            category=el.category,
            rect=rects[el.z],
            image=crop,
            fill_color=fill,
            occluded_fraction=fraction,
            fully_occluded=fully,
        )
        covered[top:bottom, left:right] = True

    return [c for c in out if c is not None]
