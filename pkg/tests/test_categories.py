from uidiff.core import (
    CATEGORIES,
    NUM_CATEGORIES,
    category_by_id,
    category_by_name,
    is_known_category,
)

import pytest


def test_exactly_25_categories():
    assert NUM_CATEGORIES == 25
    assert len(CATEGORIES) == 25


def test_ids_are_bijection_onto_range():
    assert sorted(c.id for c in CATEGORIES) == list(range(25))


def test_names_unique_and_lowercase():
    names = [c.name for c in CATEGORIES]
    assert len(set(names)) == 25
    assert all(n == n.lower() for n in names)


def test_all_ids_round_trip_through_name_lookup():
    for c in CATEGORIES:
        assert category_by_name(c.name) is c
        assert category_by_id(c.id) is c


def test_lookup_tolerates_case_and_underscores():
    assert category_by_name("Text Button").name == "text button"
    assert category_by_name("text_button").name == "text button"
    assert is_known_category("Toolbar")
    assert not is_known_category("spinner")


def test_unknown_lookups_raise():
    with pytest.raises(KeyError):
        category_by_name("frobnicator")
    with pytest.raises(KeyError):
        category_by_id(25)
