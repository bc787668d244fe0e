import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uidiff.core import (
    CATEGORIES,
    BBox,
    Layout,
    LayoutElement,
    MaskedSequence,
    MixedPadSlot,
    TokenizerConfig,
    TokenSequence,
    TooManyElements,
    InvalidBBox,
    category_by_name,
    detokenize_layout,
    empty_sequence,
    tokenize_layout,
)

CFG = TokenizerConfig()


def test_config_vocabulary_sizes():
    assert CFG.vocab_size(0) == 27  # 25 categories + PAD + MASK
    for kind in (1, 2, 3, 4):
        assert CFG.vocab_size(kind) == 34  # 32 bins + PAD + MASK
    assert CFG.seq_len == 100


def test_bins_below_two_rejected():
    with pytest.raises(ValueError):
        TokenizerConfig(bins=1)


def test_empty_layout_tokenizes_to_all_pad():
    seq = tokenize_layout(Layout(288, 512, ()), CFG)
    assert seq.tokens.shape == (100,)
    assert seq.is_pad().all()


def test_full_canvas_toolbar_slot_values():
    # Quantization oracle: clamp(floor(v * 32), 0, 31) gives [0, 0, 31, 31]
    # for bbox (0, 0, 1, 1).
    layout = Layout(
        288, 512, (LayoutElement(category_by_name("toolbar"), BBox(0, 0, 1, 1), 0),)
    )
    seq = tokenize_layout(layout, CFG)
    toolbar_id = category_by_name("toolbar").id
    assert list(seq.tokens[:5]) == [toolbar_id, 0, 0, 31, 31]
    assert seq.is_pad()[5:].all()


def test_quantization_matches_hand_oracle():
    # Oracle: clamp(floor(v * 32), 0, 31), computed by hand per case.
    cases = [(0.0001, 0), (0.03124, 0), (0.03125, 1), (0.5, 16), (0.999, 31), (1.0, 31)]
    for value, expected_bin in cases:
        layout = Layout(
            288,
            512,
            (LayoutElement(CATEGORIES[0], BBox(0.0, 0.0, value, 0.5), 0),),
        )
        seq = tokenize_layout(layout, CFG)
        oracle = min(max(int(np.floor(value * 32)), 0), 31)
        assert seq.tokens[3] == oracle == expected_bin


def test_too_many_elements_raises():
    elements = tuple(
        LayoutElement(CATEGORIES[0], BBox(0.0, i * 0.045, 0.1, 0.04), i)
        for i in range(21)
    )
    with pytest.raises(TooManyElements):
        tokenize_layout(Layout(288, 512, elements), CFG)


def test_invalid_bbox_raises():
    layout = Layout(288, 512, (LayoutElement(CATEGORIES[0], BBox(0.5, 0.5, 0.9, 0.1), 0),))
    with pytest.raises(InvalidBBox):
        tokenize_layout(layout, CFG)


def test_all_pad_detokenizes_to_empty_layout():
    layout = detokenize_layout(empty_sequence(CFG), canvas=(288, 512))
    assert layout.elements == ()
    assert (layout.canvas_w, layout.canvas_h) == (288, 512)


def test_detokenize_midpoint_formula():
    # Slot [icon, 0, 0, 31, 31] on 288x512: fractions (0.5/32, 0.5/32, then
    # the extent clamp keeps x+w at 1.0).
    tokens = CFG.pad_tokens().copy()
    tokens[0] = category_by_name("icon").id
    tokens[1:5] = [0, 0, 31, 31]
    layout = detokenize_layout(TokenSequence(tokens, CFG), canvas=(288, 512))
    b = layout.elements[0].bbox
    assert b.x == pytest.approx(0.015625)
    assert b.y == pytest.approx(0.015625)
    assert b.w == pytest.approx(0.984375)
    assert b.h == pytest.approx(0.984375)


def test_detokenize_rejects_mask():
    tokens = CFG.pad_tokens().copy()
    tokens[0] = CFG.mask_token(0)
    with pytest.raises(MaskedSequence):
        detokenize_layout(TokenSequence(tokens, CFG))


def test_detokenize_rejects_mixed_pad_slot():
    tokens = CFG.pad_tokens().copy()
    tokens[0] = 3  # category set, geometry left PAD
    with pytest.raises(MixedPadSlot):
        detokenize_layout(TokenSequence(tokens, CFG))


def test_degenerate_elements_dropped_and_counted():
    # On a tiny canvas the smallest bin midpoint (0.5/32) is under one pixel.
    tokens = CFG.pad_tokens().copy()
    tokens[0:5] = [0, 0, 0, 0, 0]
    counters = {}
    layout = detokenize_layout(TokenSequence(tokens, CFG), canvas=(8, 16), counters=counters)
    assert layout.elements == ()
    assert counters["degenerate_dropped"] == 1


def random_layout(rng: np.random.Generator, n_elements: int) -> Layout:
    elements = []
    for z in range(n_elements):
        x = rng.uniform(0, 0.97)
        y = rng.uniform(0, 0.97)
        w = rng.uniform(0.02, 1 - x)
        h = rng.uniform(0.02, 1 - y)
        elements.append(
            LayoutElement(CATEGORIES[rng.integers(0, 25)], BBox(x, y, w, h), z)
        )
    return Layout(288, 512, tuple(elements))


def test_round_trip_error_bounded_over_random_layouts():
    # 1000 random layouts; every coordinate must survive within 1/(2*bins).
    rng = np.random.default_rng(7)
    bound = 1 / 64 + 1e-9
    worst = 0.0
    for _ in range(1000):
        layout = random_layout(rng, int(rng.integers(0, 21)))
        again = detokenize_layout(tokenize_layout(layout, CFG), canvas=(288, 512))
        assert len(again.elements) == len(layout.elements)
        for a, b in zip(layout.elements, again.elements):
            assert b.category is a.category
            for va, vb in zip(
                (a.bbox.x, a.bbox.y, a.bbox.w, a.bbox.h),
                (b.bbox.x, b.bbox.y, b.bbox.w, b.bbox.h),
            ):
                worst = max(worst, abs(va - vb))
    assert worst <= bound


@st.composite
def layouts(draw):
    n = draw(st.integers(min_value=0, max_value=8))
    elements = []
    for z in range(n):
        x = draw(st.floats(0, 0.95, allow_nan=False))
        y = draw(st.floats(0, 0.95, allow_nan=False))
        w = draw(st.floats(0.02, 1, allow_nan=False).map(lambda v: v))
        h = draw(st.floats(0.02, 1, allow_nan=False))
        w = min(w, 1 - x)
        h = min(h, 1 - y)
        if w < 0.02 or h < 0.02:
            continue
        cat = CATEGORIES[draw(st.integers(0, 24))]
        elements.append(LayoutElement(cat, BBox(x, y, w, h), len(elements)))
    return Layout(288, 512, tuple(elements))


@settings(max_examples=200, deadline=None)
@given(layouts())
def test_round_trip_property(layout):
    again = detokenize_layout(tokenize_layout(layout, CFG), canvas=(288, 512))
    assert len(again.elements) == len(layout.elements)
    for a, b in zip(layout.elements, again.elements):
        assert abs(a.bbox.x - b.bbox.x) <= 1 / 64 + 1e-9
        assert abs(a.bbox.y - b.bbox.y) <= 1 / 64 + 1e-9
        assert abs(a.bbox.w - b.bbox.w) <= 1 / 64 + 1e-9
        assert abs(a.bbox.h - b.bbox.h) <= 1 / 64 + 1e-9


def test_tokenize_injective_across_distinct_bins():
    # Two layouts with every coordinate in a different bin must differ.
    a = Layout(288, 512, (LayoutElement(CATEGORIES[3], BBox(0.1, 0.1, 0.2, 0.2), 0),))
    b = Layout(288, 512, (LayoutElement(CATEGORIES[3], BBox(0.5, 0.5, 0.4, 0.4), 0),))
    sa = tokenize_layout(a, CFG)
    sb = tokenize_layout(b, CFG)
    assert not np.array_equal(sa.tokens, sb.tokens)
