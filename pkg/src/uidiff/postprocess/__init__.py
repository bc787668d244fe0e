from .codegen import GuiDocument, GuiNode, emit_html, emit_xml, generate_code, parse_xml
from .crop import (
    CanvasMismatch,
    CroppedComponent,
    EmptyRegion,
    crop_components,
    dominant_fill_color,
)

__all__ = [
    "GuiDocument",
    "GuiNode",
    "emit_html",
    "emit_xml",
    "generate_code",
    "parse_xml",
    "CanvasMismatch",
    "CroppedComponent",
    "EmptyRegion",
    "crop_components",
    "dominant_fill_color",
]
