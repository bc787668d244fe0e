"""Layout domain types: normalized bounding boxes on a portrait canvas.

A Layout is a flat, z-ordered list of categorized rectangles. It is the
lingua franca between layout generation, wireframe rendering, UI generation
and postprocessing. Geometry is stored as fractions of the canvas in [0, 1];
pixel positions are derived on demand from the canvas size.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable

from .categories import ComponentCategory, category_by_name

# Slack allowed on x+w / y+h when checking containment in the unit square.
EDGE_EPS = 1e-6

DEFAULT_CANVAS = (288, 512)
DEFAULT_E_MAX = 20


@dataclass(frozen=True)
class BBox:
    """Normalized box: x, y is the top-left corner, all fields in [0, 1]."""

    x: float
    y: float
    w: float
    h: float

    @property
    def x2(self) -> float:
        return self.x + self.w

    @property
    def y2(self) -> float:
        return self.y + self.h

    @property
    def area(self) -> float:
        return self.w * self.h

    def to_pixels(self, canvas_w: int, canvas_h: int) -> tuple[int, int, int, int]:
        """Pixel rect (left, top, right, bottom) via round-half-up of fraction*dim."""
        return (
            round_half_up(self.x * canvas_w),
            round_half_up(self.y * canvas_h),
            round_half_up(self.x2 * canvas_w),
            round_half_up(self.y2 * canvas_h),
        )


@dataclass(frozen=True)
class LayoutElement:
    category: ComponentCategory
    bbox: BBox
    z: int


@dataclass(frozen=True)
class Layout:
    canvas_w: int
    canvas_h: int
    elements: tuple[LayoutElement, ...] = field(default_factory=tuple)

    @staticmethod
    def from_boxes(
        items: Iterable[tuple[ComponentCategory, BBox]],
        canvas: tuple[int, int] = DEFAULT_CANVAS,
    ) -> "Layout":
        """Build a layout assigning z by iteration order (first item = bottom)."""
        elements = tuple(
            LayoutElement(cat, bbox, z) for z, (cat, bbox) in enumerate(items)
        )
        return Layout(canvas[0], canvas[1], elements)

    def __len__(self) -> int:
        return len(self.elements)


def round_half_up(v: float) -> int:
    """Deterministic rounding (0.5 always rounds up), unlike banker's round()."""
    return int(math.floor(v + 0.5))


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    index: int | None = None

    def __str__(self) -> str:
        where = "" if self.index is None else f" (element {self.index})"
        return f"{self.code}: {self.message}{where}"


def validate_layout(layout: Layout, e_max: int = DEFAULT_E_MAX) -> list[Violation]:
    """Return every invariant violation; the layout is valid iff [] comes back."""
    out: list[Violation] = []
    if layout.canvas_h <= layout.canvas_w:
        out.append(
            Violation(
                "portrait",
                f"canvas must be portrait, got {layout.canvas_w}x{layout.canvas_h}",
            )
        )
    if len(layout.elements) > e_max:
        out.append(
            Violation(
                "too_many_elements",
                f"{len(layout.elements)} elements exceed e_max={e_max}",
            )
        )
    for i, el in enumerate(layout.elements):
        b = el.bbox
        if not (b.w > 0):
            out.append(Violation("w_positive", f"w={b.w} must be > 0", i))
        if not (b.h > 0):
            out.append(Violation("h_positive", f"h={b.h} must be > 0", i))
        if b.x < 0 or b.y < 0:
            out.append(Violation("origin", f"x={b.x}, y={b.y} must be >= 0", i))
        if b.x + b.w > 1 + EDGE_EPS:
            out.append(Violation("right_edge", f"x+w={b.x + b.w} exceeds 1", i))
        if b.y + b.h > 1 + EDGE_EPS:
            out.append(Violation("bottom_edge", f"y+h={b.y + b.h} exceeds 1", i))
        if el.z != i:
            out.append(Violation("z_order", f"z={el.z} but list position is {i}", i))
    return out


class InvalidLayout(ValueError):
    """Raised by operations that require a valid layout."""

    def __init__(self, violations: list[Violation]):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = violations


def require_valid(layout: Layout, e_max: int = DEFAULT_E_MAX) -> None:
    violations = validate_layout(layout, e_max=e_max)
    if violations:
        raise InvalidLayout(violations)


# Canonical JSON schema, shared by the service, the CLI and the studio UI:
# {"canvas": {"w": 288, "h": 512},
#  "elements": [{"category": "toolbar", "bbox": [x, y, w, h], "z": 0}]}
# bbox fractions are serialized with 6 decimals.


def layout_to_dict(layout: Layout) -> dict:
    return {
        "canvas": {"w": layout.canvas_w, "h": layout.canvas_h},
        "elements": [
            {
                "category": el.category.name,
                "bbox": [round(v, 6) for v in (el.bbox.x, el.bbox.y, el.bbox.w, el.bbox.h)],
                "z": el.z,
            }
            for el in layout.elements
        ],
    }


def layout_from_dict(data: dict) -> Layout:
    canvas = data["canvas"]
    elements = []
    for item in data["elements"]:
        x, y, w, h = (float(v) for v in item["bbox"])
        elements.append(
            LayoutElement(
                category=category_by_name(item["category"]),
                bbox=BBox(x, y, w, h),
                z=int(item["z"]),
            )
        )
    elements.sort(key=lambda el: el.z)
    return Layout(int(canvas["w"]), int(canvas["h"]), tuple(elements))


def layout_to_json(layout: Layout) -> str:
    return json.dumps(layout_to_dict(layout), indent=2)


def layout_from_json(text: str) -> Layout:
    return layout_from_dict(json.loads(text))
