import json

import pytest
from hypothesis import given, strategies as st

from idcorr.document_model import parse_document
from idcorr.errors import DictionaryError, ExtractionError, ExtractionWarning
from idcorr.extraction import (
    DEFAULT_DICTIONARY,
    AttributeDictionary,
    DobValue,
    SingleValueAddress,
    StructuredAddress,
    SuperAttribute,
    classify_key,
    extract,
    order_name_segments,
    parse_date,
)


def doc(obj, doc_id="d"):
    return parse_document(json.dumps(obj), doc_id)


def texts(name):
    return [(s.text, s.source_key) for s in name.segments]


def test_exactly_five_super_attributes():
    assert len(SuperAttribute) == 5


def test_default_dictionary_matches_printed_sets():
    d = DEFAULT_DICTIONARY
    assert d.name == ("initials", "first_name", "middle_name", "name", "full_name", "surname", "other_names", "last_name")
    assert set(d.date_of_birth) == {"date_of_birth", "dob", "birth_date"}
    assert {k for ks in d.date_of_birth_children.values() for k in ks} == {"date", "day", "d", "month", "m", "year", "y"}
    assert set(d.gender) == {"gender", "sex"}
    address_keys = set(d.address) | set(d.address_lines) | {k for ks in d.address_levels.values() for k in ks}
    assert address_keys == {"address", "line1", "line2", "city", "zipcode", "state", "province", "country"}
    assert d.nic == ("nic",)


def test_dictionary_rejects_shared_token():
    with pytest.raises(DictionaryError):
        AttributeDictionary(gender=("gender", "name"))


def test_dictionary_from_mapping_falls_back_to_defaults(tmp_path):
    path = tmp_path / "dict.json"
    path.write_text(json.dumps({"nic": ["NIC", "National ID"]}))
    d = AttributeDictionary.load(path)
    assert d.nic == ("nic", "national_id")
    assert d.name == DEFAULT_DICTIONARY.name


def test_dictionary_unknown_field():
    with pytest.raises(DictionaryError):
        AttributeDictionary.from_mapping({"shoe": ["size"]})


@pytest.mark.parametrize(
    "path, expected",
    [
        (["surname"], (SuperAttribute.NAME, 6)),
        (["initials"], (SuperAttribute.NAME, 1)),
        (["last_name"], (SuperAttribute.NAME, 8)),
        (["dob", "year"], (SuperAttribute.DATE_OF_BIRTH, "year")),
        (["birth_date", "d"], (SuperAttribute.DATE_OF_BIRTH, "day")),
        (["dob"], (SuperAttribute.DATE_OF_BIRTH, None)),
        (["sex"], (SuperAttribute.GENDER, None)),
        (["nic"], (SuperAttribute.NIC, None)),
        (["address", "city"], (SuperAttribute.ADDRESS, "city")),
        (["address", "line1"], (SuperAttribute.ADDRESS, "line")),
        (["address", "street"], (SuperAttribute.ADDRESS, "line")),
        (["address"], (SuperAttribute.ADDRESS, "address")),
        (["child", "name"], (SuperAttribute.NAME, 4)),
        (["name", "given"], (SuperAttribute.NAME, DEFAULT_DICTIONARY.unranked)),
    ],
)
def test_classify_key(path, expected):
    assert classify_key(path) == expected


@pytest.mark.parametrize("path", [["shoe_size"], ["year"], ["dob", "weekday"], []])
def test_classify_key_unmatched(path):
    assert classify_key(path) is None


def test_order_by_canonical_rank():
    name = order_name_segments([("Silva", "surname", 0), ("Kasun Nuwan", "other_names", 1)])
    assert texts(name) == [("Silva", "surname"), ("Kasun", "other_names"), ("Nuwan", "other_names")]


def test_initials_split_into_letters():
    name = order_name_segments([("B. C.", "initials", 0), ("Perera", "surname", 1)])
    assert [s.text for s in name.segments] == ["B", "C", "Perera"]
    assert name.segments[0].rank == 1 and name.has_initials


def test_single_full_name_keeps_value_order():
    name = order_name_segments([("Ann Mary Jones", "full_name", 0)])
    assert [s.text for s in name.segments] == ["Ann", "Mary", "Jones"]


def test_first_name_precedes_last_name_regardless_of_document_order():
    name = order_name_segments([("Jones", "last_name", 0), ("Ann", "first_name", 1)])
    assert [(s.text, s.rank) for s in name.segments] == [("Ann", 2), ("Jones", 8)]


def test_unranked_keys_follow_document_order_after_ranked():
    name = order_name_segments([("B", "given", 0), ("Silva", "surname", 1), ("A", "alias", 2)])
    assert [s.text for s in name.segments] == ["Silva", "B", "A"]


def test_order_name_segments_needs_input():
    with pytest.raises(ValueError):
        order_name_segments([])


def test_extract_name_from_passport_layout():
    profile = extract(doc({"surname": "Silva", "other_names": "Kasun Nuwan"}))
    assert [s.text for s in profile.name.segments] == ["Silva", "Kasun", "Nuwan"]


def test_extract_dob_children():
    profile = extract(doc({"dob": {"day": "01", "month": "02", "year": "1990"}}))
    assert profile.dob == DobValue(1990, 2, 1)


def test_extract_nothing():
    profile = extract(doc({"shoe_size": "9", "colour": {"eyes": "brown"}}))
    assert (profile.name, profile.dob, profile.gender, profile.address, profile.nic) == (None,) * 5


@pytest.mark.parametrize(
    "text",
    ["1990-02-01", "01/02/1990", "1/2/1990", "01.02.1990", "01 February 1990", "1 feb 1990", " 1990-2-1 "],
)
def test_parse_date_formats(text):
    assert parse_date(text) == DobValue(1990, 2, 1)


@pytest.mark.parametrize("text", ["1990/02/01", "31/02/1990", "01 Brumaire 1990", "yesterday"])
def test_parse_date_rejects(text):
    with pytest.raises(ValueError):
        parse_date(text)


def test_unparseable_dob_warns_and_is_absent():
    with pytest.warns(ExtractionWarning):
        profile = extract(doc({"dob": "sometime in 1990", "nic": "1"}))
    assert profile.dob is None and profile.nic == "1"


def test_incomplete_dob_children_warn():
    with pytest.warns(ExtractionWarning):
        assert extract(doc({"dob": {"year": "1990"}})).dob is None


def test_dob_month_name_child():
    assert extract(doc({"dob": {"d": "5", "m": "March", "y": "2001"}})).dob == DobValue(2001, 3, 5)


def test_dob_date_child_holding_full_date():
    assert extract(doc({"date_of_birth": {"date": "1990-02-01"}})).dob == DobValue(1990, 2, 1)


def test_conflicting_nic_is_error():
    with pytest.raises(ExtractionError):
        extract(doc({"nic": "111V", "holder": {"nic": "222V"}}))


def test_repeated_equal_values_are_fine():
    profile = extract(doc({"nic": "111V", "holder": {"nic": "111 v"}, "gender": "M", "x": {"sex": "m"}}))
    assert profile.nic == "111V" and profile.gender == "M"


def test_conflicting_dob_is_error():
    with pytest.raises(ExtractionError):
        extract(doc({"dob": "1990-02-01", "birth_date": "1991-02-01"}))


def test_gender_kept_raw():
    assert extract(doc({"Sex": " FEMALE "})).gender == "FEMALE"


def test_structured_address():
    profile = extract(doc({"address": {"line1": "12 Galle Rd", "city": "Colombo", "country": "LK"}}))
    assert isinstance(profile.address, StructuredAddress)
    assert profile.address.levels == {"city": "Colombo", "country": "LK"}
    assert profile.address.lines == ["12 Galle Rd"]
    assert profile.address.render() == "12 Galle Rd Colombo LK"


def test_top_level_address_children_are_structured():
    profile = extract(doc({"city": "Kandy", "zipcode": "20000"}))
    assert profile.address.levels == {"city": "Kandy", "zipcode": "20000"}


def test_single_value_address():
    profile = extract(doc({"address": "12 Galle Rd Colombo"}))
    assert profile.address == SingleValueAddress("12 Galle Rd Colombo")


def test_bare_address_alongside_children_becomes_line():
    profile = extract(doc({"address": "12 Galle Rd", "city": "Colombo"}))
    assert profile.address.parts == (("line", "12 Galle Rd"), ("city", "Colombo"))


def test_empty_values_ignored():
    assert extract(doc({"nic": "  ", "surname": ""})).nic is None


canonical = ["initials", "first_name", "middle_name", "name", "full_name", "surname", "other_names", "last_name"]


@given(st.permutations(canonical), st.randoms(use_true_random=False))
def test_reordering_canonical_keys_does_not_change_name(order, rnd):
    values = {k: f"W{i}" for i, k in enumerate(canonical) if k != "initials"} | {"initials": "Q.R."}
    base = extract(doc({k: values[k] for k in canonical})).name
    shuffled = extract(doc({k: values[k] for k in order})).name
    assert base == shuffled
    # keys outside the canonical set do follow document order
    extra = ["alias_one", "alias_two"]
    rnd.shuffle(extra)
    with_extra = extract(doc({"name": {**{k: values[k] for k in order}, **{e: e.upper() for e in extra}}})).name
    assert [s.text for s in with_extra.segments[-2:]] == [e.upper() for e in extra]


@given(st.lists(st.sampled_from(canonical[1:]), min_size=1, max_size=4, unique=True),
       st.lists(st.text(alphabet="abc ", min_size=1, max_size=10), min_size=4, max_size=4))
def test_segment_count_matches_tokens(keys, values):
    obj = {k: v for k, v in zip(keys, values)}
    profile = extract(doc(obj))
    tokens = sum(len(v.split()) for v in obj.values())
    if tokens == 0:
        assert profile.name is None
    else:
        assert len(profile.name.segments) == tokens
