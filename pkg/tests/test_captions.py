import numpy as np
import pytest

from uidiff.core import BBox, Layout, category_by_name
from uidiff.rico import (
    DEFAULT_PROMPT,
    DEFAULT_TEMPLATES,
    CaptionTemplateSet,
    apply_prompt_dropout,
    generate_caption,
)


def make_layout(named_boxes):
    items = [(category_by_name(name), BBox(*b)) for name, b in named_boxes]
    return Layout.from_boxes(items)


def test_list_screen_detected_from_three_list_items():
    layout = make_layout(
        [
            ("list item", (0.0, 0.1, 1.0, 0.1)),
            ("list item", (0.0, 0.25, 1.0, 0.1)),
            ("list item", (0.0, 0.4, 1.0, 0.1)),
            ("text", (0.3, 0.55, 0.4, 0.05)),
        ]
    )
    caption = generate_caption("rec1", layout, DEFAULT_TEMPLATES, seed=0)
    assert caption.startswith("That screen maybe is a list screen.")


def test_login_screen_detected_from_input_plus_text_button():
    layout = make_layout(
        [
            ("input", (0.1, 0.3, 0.8, 0.06)),
            ("input", (0.1, 0.4, 0.8, 0.06)),
            ("text button", (0.25, 0.55, 0.5, 0.07)),
        ]
    )
    caption = generate_caption("rec2", layout, DEFAULT_TEMPLATES, seed=0)
    assert caption.startswith("That screen maybe is a login screen")


def test_largest_element_drives_generic_screen_kind():
    layout = make_layout(
        [("image", (0.0, 0.0, 1.0, 0.8)), ("icon", (0.45, 0.85, 0.1, 0.05))]
    )
    caption = generate_caption("rec3", layout, DEFAULT_TEMPLATES, seed=0)
    assert "image screen" in caption.split(".")[0]


def test_empty_layout_falls_back_to_default_prompt():
    caption = generate_caption("rec4", Layout(288, 512, ()), DEFAULT_TEMPLATES, seed=0)
    assert caption == DEFAULT_PROMPT


def test_caption_is_deterministic():
    layout = make_layout([("toolbar", (0.0, 0.0, 1.0, 0.1))])
    a = generate_caption("recX", layout, DEFAULT_TEMPLATES, seed=7)
    b = generate_caption("recX", layout, DEFAULT_TEMPLATES, seed=7)
    assert a == b


def test_caption_varies_with_seed_or_record():
    layout = make_layout(
        [("toolbar", (0.0, 0.0, 1.0, 0.1)), ("text", (0.1, 0.4, 0.8, 0.1))]
    )
    captions = {
        generate_caption(f"rec{i}", layout, DEFAULT_TEMPLATES, seed=i) for i in range(12)
    }
    assert len(captions) > 1


def test_at_most_three_component_sentences():
    layout = make_layout(
        [("icon", (0.1 * i, 0.1 * i, 0.08, 0.05)) for i in range(8)]
    )
    caption = generate_caption("rec5", layout, DEFAULT_TEMPLATES, seed=0)
    assert caption.count(".") <= 4  # screen sentence + up to 3 components


def test_template_set_requires_full_category_coverage():
    broken = {
        key: val
        for key, val in DEFAULT_TEMPLATES.component_templates.items()
        if key[0] != "toolbar"
    }
    with pytest.raises(ValueError):
        CaptionTemplateSet(component_templates=broken)


def test_dropout_p0_keeps_caption():
    rng = np.random.default_rng(0)
    assert apply_prompt_dropout("hello", 0.0, rng) == "hello"


def test_dropout_p1_replaces_with_default_prompt():
    rng = np.random.default_rng(0)
    assert apply_prompt_dropout("hello", 1.0, rng) == DEFAULT_PROMPT


def test_dropout_consumes_exactly_one_draw():
    a = np.random.default_rng(42)
    b = np.random.default_rng(42)
    apply_prompt_dropout("hello", 0.5, a)
    b.random()
    assert a.random() == b.random()


def test_dropout_rate_matches_p_over_many_draws():
    rng = np.random.default_rng(123)
    n = 10_000
    replaced = sum(
        apply_prompt_dropout("keep", 0.5, rng) == DEFAULT_PROMPT for _ in range(n)
    )
    assert 0.49 <= replaced / n <= 0.51


def test_dropout_rejects_bad_probability():
    with pytest.raises(ValueError):
        apply_prompt_dropout("x", 1.5, np.random.default_rng(0))
