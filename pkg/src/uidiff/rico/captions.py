"""Template-based caption synthesis for UI screenshots.

Captions follow the style of automatic UI captioning tools: one sentence
naming the likely screen kind, then up to three sentences pointing out
prominent components and their coarse vertical position. Rendering is a pure
function of (record id, layout, templates, seed).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from ..core import CATEGORIES, Layout

DEFAULT_PROMPT = "A nice screenshot of a mobile app"

AREAS = ("top", "center", "bottom")

_SCREEN_TEMPLATES: dict[str, tuple[str, ...]] = {
    "list": (
        "That screen maybe is a list screen. You may see a list of elements, typically arranged in rows.",
        "That screen maybe is a list screen showing several rows of items.",
    ),
    "login": (
        "That screen maybe is a login screen. You may see fields to enter credentials.",
        "That screen maybe is a login screen with input fields.",
    ),
    "generic": (
        "That screen maybe is {article} {name} screen.",
        "That screen maybe is {article} {name} screen of a mobile app.",
    ),
}

_COMPONENT_TEMPLATES: tuple[str, ...] = (
    "You may notice {article} {name} ubicated at the {area} area.",
    "You may see {article} {name} at the {area} of the screen.",
    "There is {article} {name} in the {area} area.",
)


def _article(name: str) -> str:
    return "an" if name[0] in "aeiou" else "a"


@dataclass(frozen=True)
class CaptionTemplateSet:
    """Screen-kind sentences plus per-(category, area) component phrases."""

    screen_templates: dict[str, tuple[str, ...]] = field(
        default_factory=lambda: dict(_SCREEN_TEMPLATES)
    )
    component_templates: dict[tuple[str, str], tuple[str, ...]] = field(
        default_factory=lambda: {
            (cat.name, area): _COMPONENT_TEMPLATES
            for cat in CATEGORIES
            for area in AREAS
        }
    )
    fallback: str = DEFAULT_PROMPT
    max_component_sentences: int = 3

    def __post_init__(self):
        covered = {key[0] for key in self.component_templates}
        missing = {c.name for c in CATEGORIES} - covered
        if missing:
            raise ValueError(f"categories without phrase templates: {sorted(missing)}")


DEFAULT_TEMPLATES = CaptionTemplateSet()


def _area_of(bbox) -> str:
    cy = bbox.y + bbox.h / 2
    if cy < 1 / 3:
        return "top"
    if cy < 2 / 3:
        return "center"
    return "bottom"


def _screen_kind(layout: Layout) -> str:
    names = [el.category.name for el in layout.elements]
    if names.count("list item") >= 3:
        return "list"
    if "input" in names and "text button" in names:
        return "login"
    largest = max(layout.elements, key=lambda el: el.bbox.area)
    return largest.category.name


def _caption_rng(record_id: str, seed: int) -> np.random.Generator:
    digest = hashlib.sha256(record_id.encode()).digest()
    return np.random.default_rng([seed, int.from_bytes(digest[:8], "big")])


def generate_caption(
    record_id: str,
    layout: Layout,
    templates: CaptionTemplateSet = DEFAULT_TEMPLATES,
    seed: int = 0,
) -> str:
    """Render a deterministic caption for a parsed layout."""
    if not layout.elements:
        return templates.fallback

    rng = _caption_rng(record_id, seed)
    kind = _screen_kind(layout)
    if kind in templates.screen_templates:
        variants = templates.screen_templates[kind]
        screen_sentence = variants[int(rng.integers(len(variants)))]
    else:
        variants = templates.screen_templates["generic"]
        template = variants[int(rng.integers(len(variants)))]
        screen_sentence = template.format(article=_article(kind), name=kind)

    sentences = [screen_sentence]
    by_area = sorted(layout.elements, key=lambda el: -el.bbox.area)
    for el in by_area[: templates.max_component_sentences]:
        area = _area_of(el.bbox)
        variants = templates.component_templates[(el.category.name, area)]
        template = variants[int(rng.integers(len(variants)))]
        sentences.append(
            template.format(article=_article(el.category.name), name=el.category.name, area=area)
        )
    return " ".join(sentences)


def apply_prompt_dropout(caption: str, p: float, rng: np.random.Generator) -> str:
    """With probability p, replace the caption by the default prompt.

    Consumes exactly one draw from rng.
    """
    if not 0 <= p <= 1:
        raise ValueError(f"dropout probability must be in [0, 1], got {p}")
    return DEFAULT_PROMPT if rng.random() < p else caption
