"""uidiff: generate mobile UI prototypes from component lists and text.

Pipeline: a discrete-state diffusion model arranges the requested components
into a layout; a latent diffusion model with a zero-convolution control
branch turns the layout's wireframe plus a text prompt into a UI image;
postprocessing crops reusable components and emits GUI code.
"""

__version__ = "0.1.0"

from .core import (
    BBox,
    Layout,
    LayoutElement,
    TokenizerConfig,
    TokenSequence,
    category_by_name,
    detokenize_layout,
    layout_from_json,
    layout_metrics,
    layout_to_json,
    tokenize_layout,
    validate_layout,
)
from .wireframe import DEFAULT_PALETTE, Palette, render_wireframe

__all__ = [
    "BBox",
    "Layout",
    "LayoutElement",
    "TokenizerConfig",
    "TokenSequence",
    "category_by_name",
    "detokenize_layout",
    "layout_from_json",
    "layout_metrics",
    "layout_to_json",
    "tokenize_layout",
    "validate_layout",
    "DEFAULT_PALETTE",
    "Palette",
    "render_wireframe",
    "__version__",
]
