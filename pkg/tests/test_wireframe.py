import numpy as np
import pytest

from uidiff.core import BBox, InvalidLayout, Layout, LayoutElement, category_by_name
from uidiff.wireframe import (
    DEFAULT_PALETTE,
    Palette,
    decode_category_at,
    load_png,
    render_wireframe,
    save_png,
)


def test_palette_covers_all_categories_with_distinct_colors():
    colors = set(DEFAULT_PALETTE.colors) | {DEFAULT_PALETTE.background}
    assert len(colors) == 26


def test_duplicate_palette_colors_rejected():
    colors = list(DEFAULT_PALETTE.colors)
    colors[1] = colors[0]
    with pytest.raises(ValueError):
        Palette(colors=tuple(colors))


def test_empty_layout_renders_uniform_background():
    img = render_wireframe(Layout(288, 512, ()))
    assert img.shape == (512, 288, 3)
    assert (img == np.array(DEFAULT_PALETTE.background)).all()


def test_full_canvas_image_element_fills_canvas():
    cat = category_by_name("image")
    layout = Layout(288, 512, (LayoutElement(cat, BBox(0, 0, 1, 1), 0),))
    img = render_wireframe(layout)
    assert (img == np.array(DEFAULT_PALETTE.color_of(cat))).all()


def test_painter_order_puts_higher_z_on_top():
    toolbar = category_by_name("toolbar")
    icon = category_by_name("icon")
    layout = Layout(
        288,
        512,
        (
            LayoutElement(toolbar, BBox(0.0, 0.0, 1.0, 0.5), 0),
            LayoutElement(icon, BBox(0.25, 0.125, 0.5, 0.25), 1),
        ),
    )
    img = render_wireframe(layout)
    # Overlap pixels carry the z=1 color; non-overlapped toolbar keeps its own.
    assert tuple(img[128, 144]) == DEFAULT_PALETTE.color_of(icon)
    assert tuple(img[10, 10]) == DEFAULT_PALETTE.color_of(toolbar)


def test_pixel_bounds_round_half_up():
    cat = category_by_name("card")
    layout = Layout(288, 512, (LayoutElement(cat, BBox(0.25, 0.25, 0.5, 0.5), 0),))
    img = render_wireframe(layout)
    color = np.array(DEFAULT_PALETTE.color_of(cat))
    rows = np.where((img == color).all(axis=2).any(axis=1))[0]
    cols = np.where((img == color).all(axis=2).any(axis=0))[0]
    assert rows[0] == 128 and rows[-1] == 383  # rows 128..383 = [128, 384)
    assert cols[0] == 72 and cols[-1] == 215


def test_rendering_is_bit_deterministic(tmp_path):
    rng = np.random.default_rng(5)
    elements = []
    for z in range(8):
        x, y = rng.uniform(0, 0.6, 2)
        w, h = rng.uniform(0.05, 0.35, 2)
        cat = category_by_name("text") if z % 2 else category_by_name("icon")
        elements.append(LayoutElement(cat, BBox(x, y, min(w, 1 - x), min(h, 1 - y)), z))
    layout = Layout(288, 512, tuple(elements))
    a = render_wireframe(layout)
    b = render_wireframe(layout)
    assert np.array_equal(a, b)
    save_png(a, tmp_path / "a.png")
    save_png(b, tmp_path / "b.png")
    assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()
    assert np.array_equal(load_png(tmp_path / "a.png"), a)


def test_center_pixel_decodes_back_to_category():
    rng = np.random.default_rng(9)
    # Non-overlapping vertical strips, one per sampled category.
    cats = [int(c) for c in rng.choice(25, size=6, replace=False)]
    elements = []
    for i, cid in enumerate(cats):
        from uidiff.core import CATEGORIES

        elements.append(
            LayoutElement(CATEGORIES[cid], BBox(0.05, 0.02 + i * 0.16, 0.9, 0.12), i)
        )
    layout = Layout(288, 512, tuple(elements))
    img = render_wireframe(layout)
    for i, cid in enumerate(cats):
        el = layout.elements[i]
        cx = int((el.bbox.x + el.bbox.w / 2) * 288)
        cy = int((el.bbox.y + el.bbox.h / 2) * 512)
        assert decode_category_at(img, cx, cy).id == cid


def test_invalid_layout_rejected():
    layout = Layout(288, 512, (LayoutElement(category_by_name("text"), BBox(0, 0, 2.0, 0.5), 0),))
    with pytest.raises(InvalidLayout):
        render_wireframe(layout)


def test_palette_json_round_trip(tmp_path):
    DEFAULT_PALETTE.write_json(tmp_path / "palette.json")
    import json

    data = json.loads((tmp_path / "palette.json").read_text())
    assert data["version"] == "v1"
    assert len(data["categories"]) == 25
    assert data["categories"]["toolbar"] == "#f58230"
