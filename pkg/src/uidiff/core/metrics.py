"""Deterministic layout-quality metrics: overlap, alignment, coverage.

All three ignore z order, so they are invariant under element reordering.
"""

from __future__ import annotations

from .layout import Layout


def layout_metrics(layout: Layout) -> dict[str, float]:
    """Compute {overlap, alignment, coverage} for a valid layout.

    overlap   — total pairwise intersection area over canvas area.
    alignment — mean over elements of the distance from its left/center/right
                x-coordinate to the nearest matching coordinate of any other
                element (0.0 for layouts with fewer than two elements).
    coverage  — union area over canvas area.
    """
    boxes = [el.bbox for el in layout.elements]
    if not boxes:
        return {"overlap": 0.0, "alignment": 0.0, "coverage": 0.0}

    overlap = 0.0
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            overlap += _intersection_area(boxes[i], boxes[j])

    return {
        "overlap": overlap,
        "alignment": _alignment(boxes),
        "coverage": _union_area(boxes),
    }


def _intersection_area(a, b) -> float:
    iw = min(a.x2, b.x2) - max(a.x, b.x)
    ih = min(a.y2, b.y2) - max(a.y, b.y)
    if iw <= 0 or ih <= 0:
        return 0.0
    return iw * ih


def _alignment(boxes) -> float:
    if len(boxes) < 2:
        return 0.0
    # Matching coordinates only: left-to-left, center-to-center, right-to-right.
    coords = [(b.x, b.x + b.w / 2, b.x2) for b in boxes]
    total = 0.0
    for i, ci in enumerate(coords):
        best = min(
            abs(ci[k] - cj[k])
            for j, cj in enumerate(coords)
            if j != i
            for k in range(3)
        )
        total += best
    return total / len(boxes)


def _union_area(boxes) -> float:
    """Exact union of axis-aligned rects by coordinate compression."""
    xs = sorted({v for b in boxes for v in (b.x, b.x2)})
    ys = sorted({v for b in boxes for v in (b.y, b.y2)})
    area = 0.0
    for i in range(len(xs) - 1):
        for j in range(len(ys) - 1):
            cx = (xs[i] + xs[i + 1]) / 2
            cy = (ys[j] + ys[j + 1]) / 2
            if any(b.x <= cx <= b.x2 and b.y <= cy <= b.y2 for b in boxes):
                area += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j])
    return area
