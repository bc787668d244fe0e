"""GUI code emission from a layout (geometry) and optional UI image (style).

The document model is a flat tree: a root container the size of the canvas
and one node per element with pixel-rounded geometry. When a UI image is
given, each node's background color is the dominant color of the element's
visible region. Markup targets are a minimal XML dialect and a
self-contained HTML/CSS rendering with absolute positioning.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

import numpy as np

from ..core import Layout, require_valid
from .crop import CanvasMismatch, dominant_fill_color

NODE_KINDS_EXTRA = ("container",)


@dataclass(frozen=True)
class GuiNode:
    kind: str
    x: int
    y: int
    w: int
    h: int
    background: tuple[int, int, int] | None = None
    corner: str = "square"


@dataclass(frozen=True)
class GuiDocument:
    width: int
    height: int
    nodes: tuple[GuiNode, ...] = field(default_factory=tuple)


def _hex(color: tuple[int, int, int]) -> str:
    return "#{:02x}{:02x}{:02x}".format(*color)


def _parse_hex(text: str) -> tuple[int, int, int]:
    text = text.lstrip("#")
    return tuple(int(text[i : i + 2], 16) for i in (0, 2, 4))


def generate_code(layout: Layout, ui: np.ndarray | None = None) -> GuiDocument:
    """Build the GuiDocument; style extraction runs only when ui is present."""
    require_valid(layout, e_max=max(len(layout.elements), 20))
    if ui is not None and ui.shape != (layout.canvas_h, layout.canvas_w, 3):
        raise CanvasMismatch(
            f"ui shape {ui.shape} does not match canvas "
            f"{(layout.canvas_h, layout.canvas_w, 3)}"
        )

    rects = [el.bbox.to_pixels(layout.canvas_w, layout.canvas_h) for el in layout.elements]
    backgrounds: list[tuple[int, int, int] | None] = [None] * len(layout.elements)
    if ui is not None:
        covered = np.zeros(ui.shape[:2], dtype=bool)
        for el in reversed(layout.elements):
            left, top, right, bottom = rects[el.z]
            region = ui[top:bottom, left:right]
            occluded = covered[top:bottom, left:right]
            visible = region[~occluded]
            source = visible if visible.size else region
            if source.size:
                backgrounds[el.z] = dominant_fill_color(source)
            covered[top:bottom, left:right] = True

    nodes = tuple(
        GuiNode(
            kind=el.category.name,
            x=rects[el.z][0],
            y=rects[el.z][1],
            w=rects[el.z][2] - rects[el.z][0],
            h=rects[el.z][3] - rects[el.z][1],
            background=backgrounds[el.z],
        )
        for el in layout.elements
    )
    return GuiDocument(layout.canvas_w, layout.canvas_h, nodes)


def emit_xml(doc: GuiDocument) -> str:
    """Canonical XML: fixed attribute order, one line per node."""
    lines = [f'<screen w="{doc.width}" h="{doc.height}">']
    for node in doc.nodes:
        attrs = f'kind="{node.kind}" x="{node.x}" y="{node.y}" w="{node.w}" h="{node.h}"'
        if node.background is not None:
            attrs += f' bg="{_hex(node.background)}"'
        if node.corner != "square":
            attrs += f' corner="{node.corner}"'
        lines.append(f"  <node {attrs}/>")
    lines.append("</screen>")
    return "\n".join(lines) + "\n"


def parse_xml(text: str) -> GuiDocument:
    root = ET.fromstring(text)
    if root.tag != "screen":
        raise ValueError(f"expected <screen> root, got <{root.tag}>")
    nodes = []
    for child in root:
        if child.tag != "node":
            raise ValueError(f"unexpected element <{child.tag}>")
        bg = child.get("bg")
        nodes.append(
            GuiNode(
                kind=child.get("kind"),
                x=int(child.get("x")),
                y=int(child.get("y")),
                w=int(child.get("w")),
                h=int(child.get("h")),
                background=_parse_hex(bg) if bg else None,
                corner=child.get("corner", "square"),
            )
        )
    return GuiDocument(int(root.get("w")), int(root.get("h")), tuple(nodes))


def emit_html(doc: GuiDocument) -> str:
    """Self-contained HTML: exactly one absolutely positioned block per node."""
    blocks = []
    for node in doc.nodes:
        style = (
            f"position:absolute;left:{node.x}px;top:{node.y}px;"
            f"width:{node.w}px;height:{node.h}px;"
        )
        if node.background is not None:
            style += f"background:{_hex(node.background)};"
        blocks.append(
            f'    <div class="node" data-kind="{node.kind}" style="{style}"></div>'
        )
    body = "\n".join(blocks)
    return (
        "<!DOCTYPE html>\n"
        "<html>\n<head>\n<meta charset=\"utf-8\"/>\n"
        "<style>\n"
        ".screen { position: relative; background: #ffffff; margin: 0 auto; "
        "outline: 1px solid #ccc; }\n"
        ".node { box-sizing: border-box; border: 1px dashed rgba(0,0,0,0.2); }\n"
        "</style>\n</head>\n<body>\n"
        f'  <div class="screen" style="width:{doc.width}px;height:{doc.height}px;">\n'
        f"{body}\n"
        "  </div>\n</body>\n</html>\n"
    )
