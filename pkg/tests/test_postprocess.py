from collections import Counter

import numpy as np
import pytest

from uidiff.core import BBox, Layout, LayoutElement, category_by_name, round_half_up
from uidiff.postprocess import (
    CanvasMismatch,
    EmptyRegion,
    crop_components,
    dominant_fill_color,
    emit_html,
    emit_xml,
    generate_code,
    parse_xml,
)


def solid(color, h=20, w=20):
    img = np.empty((h, w, 3), dtype=np.uint8)
    img[:, :] = color
    return img


def test_dominant_color_of_solid_region():
    assert dominant_fill_color(solid((10, 20, 200))) == (10, 20, 200)


def test_dominant_color_majority_wins():
    img = solid((10, 20, 200), 10, 10)
    img[:3, :] = (255, 255, 255)  # 30%
    assert dominant_fill_color(img) == (10, 20, 200)


def test_dominant_color_tie_breaks_to_lowest_quantized_tuple():
    img = solid((200, 0, 0), 10, 10)
    img[:5, :] = (0, 0, 200)  # exact 50/50
    assert dominant_fill_color(img) == (0, 0, 200)


def test_dominant_color_matches_brute_force_oracle():
    rng = np.random.default_rng(0)
    for _ in range(20):
        img = rng.integers(0, 256, size=(12, 9, 3), dtype=np.uint8)
        # Oracle: counts per quantized bin via a Counter, ties by lowest tuple,
        # then the mean of true pixels in the winning bin.
        quant = [tuple(p // 8) for p in img.reshape(-1, 3)]
        counts = Counter(quant)
        best = min(counts, key=lambda q: (-counts[q], q))
        members = np.array(
            [p for p in img.reshape(-1, 3) if tuple(p // 8) == best], dtype=np.float64
        )
        expected = tuple(int(round_half_up(v)) for v in members.mean(axis=0))
        assert dominant_fill_color(img) == expected


def test_empty_region_raises():
    with pytest.raises(EmptyRegion):
        dominant_fill_color(np.zeros((0, 3), dtype=np.uint8))


def layout_of(boxes):
    elements = tuple(
        LayoutElement(category_by_name(name), BBox(*b), z)
        for z, (name, b) in enumerate(boxes)
    )
    return Layout(288, 512, elements)


def test_disjoint_elements_crop_raw_subimages():
    layout = layout_of(
        [("toolbar", (0.0, 0.0, 1.0, 0.125)), ("card", (0.0, 0.5, 0.5, 0.25))]
    )
    ui = solid((200, 200, 200), 512, 288)
    ui[:64, :] = (10, 50, 90)  # toolbar area
    crops = crop_components(ui, layout)
    assert [c.category.name for c in crops] == ["toolbar", "card"]
    assert crops[0].fill_color is None and crops[1].fill_color is None
    assert crops[0].occluded_fraction == 0.0
    assert np.array_equal(crops[0].image, ui[:64, :288])
    assert np.array_equal(crops[1].image, ui[256:384, :144])


def test_occluded_lower_element_healed_with_visible_mode():
    # Lower: solid blue half-canvas card; upper: small white button inside it.
    layout = layout_of(
        [("card", (0.0, 0.0, 1.0, 0.5)), ("text button", (0.25, 0.125, 0.25, 0.125))]
    )
    blue, white = (20, 40, 220), (250, 250, 250)
    ui = solid((0, 0, 0), 512, 288)
    card_rect = layout.elements[0].bbox.to_pixels(288, 512)
    btn_rect = layout.elements[1].bbox.to_pixels(288, 512)
    ui[card_rect[1]:card_rect[3], card_rect[0]:card_rect[2]] = blue
    ui[btn_rect[1]:btn_rect[3], btn_rect[0]:btn_rect[2]] = white

    crops = crop_components(ui, layout)
    lower, upper = crops[0], crops[1]
    assert upper.fill_color is None
    assert np.array_equal(
        upper.image, ui[btn_rect[1]:btn_rect[3], btn_rect[0]:btn_rect[2]]
    )
    # The lower crop's occluded rect is healed with blue everywhere.
    assert lower.fill_color == blue
    assert (lower.image == np.array(blue)).all()
    overlap_area = (btn_rect[2] - btn_rect[0]) * (btn_rect[3] - btn_rect[1])
    card_area = (card_rect[2] - card_rect[0]) * (card_rect[3] - card_rect[1])
    assert lower.occluded_fraction == pytest.approx(overlap_area / card_area)


def test_fill_never_touches_visible_pixels():
    rng = np.random.default_rng(1)
    layout = layout_of(
        [("image", (0.1, 0.1, 0.6, 0.4)), ("modal", (0.3, 0.2, 0.5, 0.4))]
    )
    ui = rng.integers(0, 256, size=(512, 288, 3), dtype=np.uint8)
    crops = crop_components(ui, layout)
    lower = crops[0]
    left, top, right, bottom = lower.rect
    raw = ui[top:bottom, left:right]
    m_left, m_top, m_right, m_bottom = layout.elements[1].bbox.to_pixels(288, 512)
    occluded = np.zeros((512, 288), dtype=bool)
    occluded[m_top:m_bottom, m_left:m_right] = True
    occ = occluded[top:bottom, left:right]
    assert np.array_equal(lower.image[~occ], raw[~occ])
    assert (lower.image[occ] == np.array(lower.fill_color)).all()


def test_fully_occluded_element_flagged():
    layout = layout_of(
        [("icon", (0.25, 0.25, 0.25, 0.25)), ("modal", (0.0, 0.0, 1.0, 1.0))]
    )
    ui = solid((90, 120, 30), 512, 288)
    crops = crop_components(ui, layout)
    assert crops[0].fully_occluded
    assert crops[0].occluded_fraction == 1.0
    assert crops[0].fill_color == (90, 120, 30)


def test_crop_canvas_mismatch():
    layout = layout_of([("icon", (0.1, 0.1, 0.2, 0.2))])
    with pytest.raises(CanvasMismatch):
        crop_components(solid((0, 0, 0), 100, 100), layout)


def test_crop_sizes_match_rects_and_reassembly():
    rng = np.random.default_rng(2)
    layout = layout_of(
        [("toolbar", (0.0, 0.0, 1.0, 0.1)), ("card", (0.1, 0.3, 0.5, 0.3)),
         ("icon", (0.7, 0.5, 0.2, 0.1))]
    )
    ui = rng.integers(0, 256, size=(512, 288, 3), dtype=np.uint8)
    crops = crop_components(ui, layout)
    canvas = np.zeros_like(ui)
    for c in crops:
        left, top, right, bottom = c.rect
        assert c.image.shape == (bottom - top, right - left, 3)
        canvas[top:bottom, left:right] = c.image
    # No overlaps here, so pasting the crops back reproduces the UI there.
    for c in crops:
        left, top, right, bottom = c.rect
        assert np.array_equal(canvas[top:bottom, left:right], ui[top:bottom, left:right])


def test_generate_code_empty_layout():
    doc = generate_code(Layout(288, 512, ()))
    assert doc.width == 288 and doc.height == 512
    assert doc.nodes == ()
    assert emit_xml(doc) == '<screen w="288" h="512">\n</screen>\n'


def test_generate_code_full_canvas_image():
    layout = layout_of([("image", (0.0, 0.0, 1.0, 1.0))])
    doc = generate_code(layout)
    node = doc.nodes[0]
    assert (node.kind, node.x, node.y, node.w, node.h) == ("image", 0, 0, 288, 512)
    assert node.background is None


def test_codegen_style_extraction_uses_visible_region():
    layout = layout_of(
        [("card", (0.0, 0.0, 1.0, 0.5)), ("text button", (0.25, 0.125, 0.25, 0.125))]
    )
    ui = solid((0, 0, 0), 512, 288)
    ui[0:256, :] = (20, 40, 220)
    btn = layout.elements[1].bbox.to_pixels(288, 512)
    ui[btn[1]:btn[3], btn[0]:btn[2]] = (250, 250, 250)
    doc = generate_code(layout, ui)
    assert doc.nodes[0].background == (20, 40, 220)
    assert doc.nodes[1].background == (250, 250, 250)


def test_xml_round_trip_is_fixed_point():
    rng = np.random.default_rng(3)
    for _ in range(100):
        boxes = []
        for z in range(int(rng.integers(0, 8))):
            x, y = rng.uniform(0, 0.7, 2)
            w, h = rng.uniform(0.05, 0.3, 2)
            boxes.append(("icon", (x, y, min(w, 1 - x), min(h, 1 - y))))
        doc = generate_code(layout_of(boxes))
        text = emit_xml(doc)
        again = parse_xml(text)
        assert again == doc
        assert emit_xml(again) == text


def test_html_has_one_positioned_block_per_element_with_exact_geometry():
    import re

    layout = layout_of(
        [("toolbar", (0.0, 0.0, 1.0, 0.08)), ("text button", (0.25, 0.7, 0.5, 0.08))]
    )
    doc = generate_code(layout)
    html = emit_html(doc)
    blocks = re.findall(r'<div class="node" data-kind="([^"]+)" style="([^"]+)"', html)
    assert len(blocks) == len(doc.nodes)
    for node, (kind, style) in zip(doc.nodes, blocks):
        assert kind == node.kind
        assert f"left:{node.x}px" in style
        assert f"top:{node.y}px" in style
        assert f"width:{node.w}px" in style
        assert f"height:{node.h}px" in style


def test_codegen_canvas_mismatch():
    layout = layout_of([("icon", (0.1, 0.1, 0.2, 0.2))])
    with pytest.raises(CanvasMismatch):
        generate_code(layout, solid((0, 0, 0), 10, 10))
