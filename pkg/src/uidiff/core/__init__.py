from .categories import (
    CATEGORIES,
    NUM_CATEGORIES,
    ComponentCategory,
    category_by_id,
    category_by_name,
    is_known_category,
)
from .layout import (
    DEFAULT_CANVAS,
    DEFAULT_E_MAX,
    BBox,
    InvalidLayout,
    Layout,
    LayoutElement,
    Violation,
    layout_from_dict,
    layout_from_json,
    layout_to_dict,
    layout_to_json,
    require_valid,
    round_half_up,
    validate_layout,
)
from .metrics import layout_metrics
from .tokenizer import (
    GEOMETRY_KINDS,
    KIND_CAT,
    TOKENS_PER_SLOT,
    InvalidBBox,
    MaskedSequence,
    MixedPadSlot,
    TokenizerConfig,
    TokenSequence,
    TooManyElements,
    detokenize_layout,
    empty_sequence,
    tokenize_layout,
)

__all__ = [
    "CATEGORIES",
    "NUM_CATEGORIES",
    "ComponentCategory",
    "category_by_id",
    "category_by_name",
    "is_known_category",
    "DEFAULT_CANVAS",
    "DEFAULT_E_MAX",
    "BBox",
    "InvalidLayout",
    "Layout",
    "LayoutElement",
    "Violation",
    "layout_from_dict",
    "layout_from_json",
    "layout_to_dict",
    "layout_to_json",
    "require_valid",
    "round_half_up",
    "validate_layout",
    "layout_metrics",
    "GEOMETRY_KINDS",
    "KIND_CAT",
    "TOKENS_PER_SLOT",
    "InvalidBBox",
    "MaskedSequence",
    "MixedPadSlot",
    "TokenizerConfig",
    "TokenSequence",
    "TooManyElements",
    "detokenize_layout",
    "empty_sequence",
    "tokenize_layout",
]
