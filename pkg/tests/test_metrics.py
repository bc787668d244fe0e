import numpy as np
import pytest

from uidiff.core import BBox, CATEGORIES, Layout, LayoutElement, layout_metrics


def make_layout(boxes):
    elements = tuple(
        LayoutElement(CATEGORIES[i % 25], BBox(*b), i) for i, b in enumerate(boxes)
    )
    return Layout(288, 512, elements)


def test_empty_layout_gives_zeros():
    assert layout_metrics(Layout(288, 512, ())) == {
        "overlap": 0.0,
        "alignment": 0.0,
        "coverage": 0.0,
    }


def test_two_identical_full_canvas_elements():
    m = layout_metrics(make_layout([(0, 0, 1, 1), (0, 0, 1, 1)]))
    assert m["overlap"] == pytest.approx(1.0)
    assert m["coverage"] == pytest.approx(1.0)


def test_two_disjoint_quarter_elements():
    m = layout_metrics(make_layout([(0, 0, 0.5, 0.5), (0.5, 0.5, 0.5, 0.5)]))
    assert m["overlap"] == 0.0
    assert m["coverage"] == pytest.approx(0.5)


def test_overlap_counts_all_pairs():
    # Three identical half-canvas boxes: 3 pairs, each intersecting 0.5.
    m = layout_metrics(make_layout([(0, 0, 1, 0.5)] * 3))
    assert m["overlap"] == pytest.approx(1.5)
    assert m["coverage"] == pytest.approx(0.5)


def test_coverage_of_partial_overlap():
    # Union of (0,0,.5,.5) and (.25,.25,.5,.5) = .25 + .25 - .0625
    m = layout_metrics(make_layout([(0, 0, 0.5, 0.5), (0.25, 0.25, 0.5, 0.5)]))
    assert m["coverage"] == pytest.approx(0.4375)
    assert m["overlap"] == pytest.approx(0.0625)


def test_alignment_zero_for_aligned_columns():
    m = layout_metrics(make_layout([(0.1, 0.1, 0.3, 0.1), (0.1, 0.4, 0.3, 0.1)]))
    assert m["alignment"] == pytest.approx(0.0)


def test_alignment_measures_nearest_matching_coordinate():
    # Left edges 0.1 vs 0.2; centers 0.25 vs 0.35; rights 0.4 vs 0.5:
    # every matching-coordinate distance is 0.1.
    m = layout_metrics(make_layout([(0.1, 0.1, 0.3, 0.1), (0.2, 0.4, 0.3, 0.1)]))
    assert m["alignment"] == pytest.approx(0.1)


def test_single_element_alignment_zero():
    m = layout_metrics(make_layout([(0.2, 0.2, 0.5, 0.2)]))
    assert m["alignment"] == 0.0


def test_metrics_permutation_invariant():
    rng = np.random.default_rng(3)
    boxes = []
    for _ in range(6):
        x, y = rng.uniform(0, 0.6, 2)
        w, h = rng.uniform(0.05, 0.3, 2)
        boxes.append((x, y, min(w, 1 - x), min(h, 1 - y)))
    base = layout_metrics(make_layout(boxes))
    for _ in range(5):
        perm = list(rng.permutation(len(boxes)))
        m = layout_metrics(make_layout([boxes[i] for i in perm]))
        for key in base:
            assert m[key] == pytest.approx(base[key])


def test_coverage_against_pixel_oracle():
    # Independent oracle: brute-force rasterization on a 1000x1000 grid.
    rng = np.random.default_rng(11)
    for _ in range(5):
        boxes = []
        for _ in range(5):
            x, y = rng.uniform(0, 0.7, 2)
            w, h = rng.uniform(0.1, 0.4, 2)
            boxes.append((x, y, min(w, 1 - x), min(h, 1 - y)))
        grid = np.zeros((1000, 1000), dtype=bool)
        for x, y, w, h in boxes:
            grid[int(y * 1000) : int((y + h) * 1000), int(x * 1000) : int((x + w) * 1000)] = True
        oracle = grid.mean()
        m = layout_metrics(make_layout(boxes))
        assert m["coverage"] == pytest.approx(oracle, abs=5e-3)
