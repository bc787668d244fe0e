"""The fixed 25-category vocabulary of mobile UI components.

Category ids are a stable bijection onto [0, 24]; names are lowercase and
unique. The vocabulary follows the Rico semantic annotation labels.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ComponentCategory:
    id: int
    name: str


_NAMES = (
    "text",
    "text button",
    "icon",
    "image",
    "toolbar",
    "list item",
    "input",
    "background image",
    "card",
    "web view",
    "radio button",
    "drawer",
    "checkbox",
    "advertisement",
    "modal",
    "pager indicator",
    "slider",
    "on/off switch",
    "button bar",
    "number stepper",
    "multi-tab",
    "date picker",
    "map view",
    "video",
    "bottom navigation",
)

CATEGORIES: tuple[ComponentCategory, ...] = tuple(
    ComponentCategory(i, name) for i, name in enumerate(_NAMES)
)

NUM_CATEGORIES = len(CATEGORIES)

_BY_NAME = {c.name: c for c in CATEGORIES}


def category_by_id(cat_id: int) -> ComponentCategory:
    if not 0 <= cat_id < NUM_CATEGORIES:
        raise KeyError(f"no component category with id {cat_id}")
    return CATEGORIES[cat_id]


def category_by_name(name: str) -> ComponentCategory:
    """Look up a category by name. Case-insensitive, tolerant of underscores."""
    key = name.strip().lower().replace("_", " ")
    try:
        return _BY_NAME[key]
    except KeyError:
        raise KeyError(f"unknown component category {name!r}") from None


def is_known_category(name: str) -> bool:
    return name.strip().lower().replace("_", " ") in _BY_NAME
