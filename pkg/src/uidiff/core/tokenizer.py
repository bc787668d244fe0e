"""Discrete tokenizer between Layouts and fixed-length token sequences.

Each element occupies one slot of five tokens [category, x, y, w, h].
Category tokens index the 25-way vocabulary; geometric tokens index a uniform
bin grid. Each attribute kind has its own vocabulary with two trailing
specials, PAD then MASK, so a sequence position is only ever interpreted
against the vocabulary of its kind.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .categories import CATEGORIES, NUM_CATEGORIES
from .layout import (
    BBox,
    Layout,
    LayoutElement,
    Violation,
    validate_layout,
)

TOKENS_PER_SLOT = 5

# Attribute kinds, by position within a slot.
KIND_CAT = 0
KIND_X = 1
KIND_Y = 2
KIND_W = 3
KIND_H = 4
GEOMETRY_KINDS = (KIND_X, KIND_Y, KIND_W, KIND_H)


class TokenizerError(ValueError):
    pass


class TooManyElements(TokenizerError):
    pass


class InvalidBBox(TokenizerError):
    def __init__(self, violations: list[Violation]):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = violations


class MaskedSequence(TokenizerError):
    pass


class MixedPadSlot(TokenizerError):
    pass


@dataclass(frozen=True)
class TokenizerConfig:
    bins: int = 32
    e_max: int = 20

    def __post_init__(self):
        if self.bins < 2:
            raise ValueError(f"bins must be >= 2, got {self.bins}")
        if self.e_max < 1:
            raise ValueError(f"e_max must be >= 1, got {self.e_max}")

    @property
    def seq_len(self) -> int:
        return TOKENS_PER_SLOT * self.e_max

    def vocab_size(self, kind: int) -> int:
        return (NUM_CATEGORIES if kind == KIND_CAT else self.bins) + 2

    def pad_token(self, kind: int) -> int:
        return NUM_CATEGORIES if kind == KIND_CAT else self.bins

    def mask_token(self, kind: int) -> int:
        return self.pad_token(kind) + 1

    def kinds(self) -> np.ndarray:
        """Attribute kind of every sequence position."""
        return np.tile(np.arange(TOKENS_PER_SLOT), self.e_max)

    def pad_tokens(self) -> np.ndarray:
        """Per-position PAD token id."""
        return np.array([self.pad_token(k) for k in self.kinds()], dtype=np.int64)

    def mask_tokens(self) -> np.ndarray:
        return np.array([self.mask_token(k) for k in self.kinds()], dtype=np.int64)


@dataclass(frozen=True)
class TokenSequence:
    tokens: np.ndarray  # int64, shape (5 * e_max,)
    config: TokenizerConfig

    def __post_init__(self):
        if self.tokens.shape != (self.config.seq_len,):
            raise ValueError(
                f"token array shape {self.tokens.shape} does not match "
                f"config seq_len {self.config.seq_len}"
            )

    @property
    def attribute_kinds(self) -> np.ndarray:
        return self.config.kinds()

    def slots(self) -> np.ndarray:
        return self.tokens.reshape(self.config.e_max, TOKENS_PER_SLOT)

    def is_pad(self) -> np.ndarray:
        return self.tokens == self.config.pad_tokens()

    def is_mask(self) -> np.ndarray:
        return self.tokens == self.config.mask_tokens()


def tokenize_layout(layout: Layout, cfg: TokenizerConfig = TokenizerConfig()) -> TokenSequence:
    """Quantize a valid layout into a token sequence; unused slots are all-PAD.

    Geometry uses bin = clamp(floor(value * bins), 0, bins - 1).
    """
    if len(layout.elements) > cfg.e_max:
        raise TooManyElements(
            f"{len(layout.elements)} elements exceed e_max={cfg.e_max}"
        )
    violations = [
        v for v in validate_layout(layout, e_max=cfg.e_max) if v.code != "portrait"
    ]
    if violations:
        raise InvalidBBox(violations)

    tokens = cfg.pad_tokens().copy()
    for i, el in enumerate(layout.elements):
        base = i * TOKENS_PER_SLOT
        tokens[base + KIND_CAT] = el.category.id
        for kind, value in zip(GEOMETRY_KINDS, (el.bbox.x, el.bbox.y, el.bbox.w, el.bbox.h)):
            b = int(np.floor(value * cfg.bins))
            tokens[base + kind] = min(max(b, 0), cfg.bins - 1)
    return TokenSequence(tokens, cfg)


def detokenize_layout(
    seq: TokenSequence,
    canvas: tuple[int, int] = (288, 512),
    counters: dict | None = None,
) -> Layout:
    """Reconstruct a Layout from a fully denoised sequence.

    Bin b maps back to the fraction (b + 0.5) / bins. All-PAD slots are
    skipped. Elements whose width or height dequantizes below one pixel are
    dropped (counted in counters["degenerate_dropped"] when a dict is given).
    """
    cfg = seq.config
    if seq.is_mask().any():
        raise MaskedSequence("sequence still contains MASK tokens")

    canvas_w, canvas_h = canvas
    elements: list[LayoutElement] = []
    pad = seq.is_pad().reshape(cfg.e_max, TOKENS_PER_SLOT)
    slots = seq.slots()
    for i in range(cfg.e_max):
        if pad[i].all():
            continue
        if pad[i].any():
            raise MixedPadSlot(f"slot {i} mixes PAD and non-PAD tokens")
        cat_id = int(slots[i, KIND_CAT])
        x, y, w, h = ((slots[i, k] + 0.5) / cfg.bins for k in GEOMETRY_KINDS)
        # Midpoints of the highest bins can push x+w past 1; clamp the extent
        # so detokenized layouts always satisfy the containment invariant.
        # The round-trip error stays within 1/(2*bins).
        w = min(w, 1.0 - x)
        h = min(h, 1.0 - y)
        if w * canvas_w < 1.0 or h * canvas_h < 1.0:
            if counters is not None:
                counters["degenerate_dropped"] = counters.get("degenerate_dropped", 0) + 1
            continue
        elements.append(
            LayoutElement(CATEGORIES[cat_id], BBox(x, y, w, h), z=len(elements))
        )
    return Layout(canvas_w, canvas_h, tuple(elements))


def empty_sequence(cfg: TokenizerConfig) -> TokenSequence:
    return TokenSequence(cfg.pad_tokens().copy(), cfg)
