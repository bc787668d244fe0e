"""Flatten Rico-style view hierarchies into Layouts.

A hierarchy is a nested node tree; each node may carry absolute pixel
"bounds" [left, top, right, bottom] and a "componentLabel". Leaf nodes with
a recognized label become layout elements, normalized by the root bounds.
"""

from __future__ import annotations

from ..core import (
    DEFAULT_E_MAX,
    BBox,
    Layout,
    LayoutElement,
    category_by_name,
    is_known_category,
)


class MalformedHierarchy(ValueError):
    pass


def _bounds(node: dict) -> tuple[float, float, float, float]:
    try:
        left, top, right, bottom = (float(v) for v in node["bounds"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedHierarchy(f"node without usable bounds: {exc}") from exc
    return left, top, right, bottom


def parse_hierarchy(
    hierarchy: dict,
    canvas: tuple[int, int] = (288, 512),
    e_max: int = DEFAULT_E_MAX,
    counters: dict | None = None,
) -> Layout:
    """Extract a flat Layout from a hierarchy tree.

    Leaf nodes with a recognized category label become elements (z = depth
    first visit order), with bounds normalized by the root bounds and clipped
    to the unit square. When more than e_max survive, the largest by area are
    kept. Skips are tallied into counters when a dict is passed.
    """
    root_l, root_t, root_r, root_b = _bounds(hierarchy)
    root_w, root_h = root_r - root_l, root_b - root_t
    if root_w <= 0 or root_h <= 0:
        raise MalformedHierarchy(f"root bounds are degenerate: {hierarchy['bounds']}")

    def count(reason: str) -> None:
        if counters is not None:
            counters[reason] = counters.get(reason, 0) + 1

    collected: list[tuple[object, BBox]] = []
    seen: set[int] = set()

    def visit(node: dict) -> None:
        if not isinstance(node, dict):
            raise MalformedHierarchy(f"node is not an object: {type(node).__name__}")
        if id(node) in seen:
            raise MalformedHierarchy("cyclic structure")
        seen.add(id(node))

        children = node.get("children") or []
        if children:
            for child in children:
                visit(child)
            return

        label = node.get("componentLabel")
        if not label:
            count("unlabeled")
            return
        if not is_known_category(str(label)):
            count("unrecognized_label")
            return
        left, top, right, bottom = _bounds(node)
        x = max((left - root_l) / root_w, 0.0)
        y = max((top - root_t) / root_h, 0.0)
        x2 = min((right - root_l) / root_w, 1.0)
        y2 = min((bottom - root_t) / root_h, 1.0)
        if x2 - x <= 0 or y2 - y <= 0:
            count("degenerate")
            return
        collected.append((category_by_name(str(label)), BBox(x, y, x2 - x, y2 - y)))

    visit(hierarchy)

    if len(collected) > e_max:
        # Keep the e_max largest by area, preserving visit order among kept.
        order = sorted(range(len(collected)), key=lambda i: -collected[i][1].area)
        keep = sorted(order[:e_max])
        if counters is not None:
            counters["over_e_max_dropped"] = len(collected) - e_max
        collected = [collected[i] for i in keep]

    elements = tuple(
        LayoutElement(cat, bbox, z) for z, (cat, bbox) in enumerate(collected)
    )
    return Layout(canvas[0], canvas[1], elements)
