import csv
import random
from collections import Counter
from importlib import resources

import pytest
from hypothesis import given, strategies as st

from idcorr.extraction import DobValue, SingleValueAddress, StructuredAddress
from idcorr.field_correlation import (
    GenderClass,
    address_score,
    address_scores,
    candidate_scores,
    classify_gender,
    country_equivalent,
    dob_score,
    gender_score,
    majority_candidate,
    nic_score,
)

D1, D2 = DobValue(1990, 2, 1), DobValue(1990, 12, 1)


def structured(*parts):
    return StructuredAddress(tuple(parts))


def test_majority_clear_plurality():
    c = majority_candidate([D1, D1, D2])
    assert (c.value, c.vote_count) == (D1, 2)


def test_majority_tie_goes_to_first():
    assert majority_candidate(["A", "B"]).value == "A"
    assert majority_candidate(["B", "A", "A", "B"]).value == "B"


def test_majority_singleton_and_empty():
    assert majority_candidate(["X"]).value == "X"
    with pytest.raises(ValueError):
        majority_candidate([])


def test_dob_scores():
    assert [dob_score(k, [D1, D1, D1]) for k in range(3)] == [1.0, 1.0, 1.0]
    dobs = [D1, D1, DobValue(1991, 2, 1)]
    assert [dob_score(k, dobs) for k in range(3)] == [1.0, 1.0, 0.0]
    assert dob_score(2, [D1, D1, None]) is None
    assert dob_score(0, [D1, None]) is None


@pytest.mark.parametrize(
    "raw, cls",
    [("FEMALE", GenderClass.CLASS1), ("f", GenderClass.CLASS1), ("m", GenderClass.CLASS2),
     (" Male ", GenderClass.CLASS2), ("non-binary", GenderClass.UNCLASSIFIED), ("", GenderClass.UNCLASSIFIED)],
)
def test_classify_gender(raw, cls):
    assert classify_gender(raw) is cls


def test_gender_scores():
    assert [gender_score(k, ["F", "female"]) for k in range(2)] == [1.0, 1.0]
    assert [gender_score(k, ["F", "female", "M"]) for k in range(3)] == [1.0, 1.0, 0.0]
    assert [gender_score(k, ["F", "unknown"]) for k in range(2)] == [None, None]


def test_nic_scores():
    assert [nic_score(k, ["931234567V", "931234567v"]) for k in range(2)] == [1.0, 1.0]
    assert [nic_score(k, ["931234567V", "199312345678"]) for k in range(2)] == [1.0, 0.0]
    assert nic_score(0, ["931234567V", None]) is None


def test_nic_ignores_inner_whitespace():
    assert nic_score(1, ["93 1234 567V", "931234567 v"]) == 1.0


def test_country_equivalence():
    assert country_equivalent("Sri Lanka", "LK")
    assert country_equivalent("LKA", "lk")
    assert country_equivalent("sri lanka", "SRI LANKA")
    assert not country_equivalent("Sri Lanka", "India")
    assert country_equivalent("Atlantis", "atlantis")


def test_country_table_shape():
    with resources.files("idcorr").joinpath("data/countries.csv").open(encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 249
    assert {r["alpha2"] for r in rows} >= {"LK", "IN", "GB", "US"}
    assert all(len(r["alpha2"]) == 2 and len(r["alpha3"]) == 3 for r in rows)
    assert len({r["alpha2"] for r in rows}) == len(rows)


def test_address_identical_structured():
    a = structured(("country", "Sri Lanka"), ("city", "Colombo"), ("line", "12 Galle Rd"))
    assert [address_score(k, [a, a]) for k in range(2)] == [1.0, 1.0]


def test_address_country_gate():
    lk = structured(("country", "Sri Lanka"), ("line", "12 Galle Rd"))
    inn = structured(("country", "India"), ("line", "12 Galle Rd"))
    lk_code = structured(("country", "LK"), ("line", "12 Galle Rd"))
    results = address_scores([lk, inn, lk_code])
    assert results[1].score == 0.0 and results[1].failed_level == "country"
    # the two Sri Lanka documents still compare against all carriers' text
    assert results[0].score == pytest.approx((1.0 + 1.0) / 2)


def test_address_later_gate_fails():
    a = structured(("country", "LK"), ("city", "Colombo"))
    b = structured(("country", "LK"), ("city", "Kandy"))
    c = structured(("country", "Sri Lanka"), ("city", "colombo"))
    results = address_scores([a, b, c])
    assert [r.score for r in results] == [1.0, 0.0, 1.0]
    assert results[1].failed_level == "city"
    assert results[0].gated_levels == ("country", "city")


def test_level_not_shared_by_all_is_free_text():
    a = structured(("city", "Colombo"), ("line", "Galle Road"))
    b = structured(("line", "Galle Road"))
    result = address_scores([a, b])[0]
    assert result.gated_levels == ()
    # Galle, Road vs Galle, Road, Colombo: 2 in-order matches over 3 units
    assert result.score == pytest.approx((2 / 3 + 2 / 3) / 2)


def test_single_value_fallback():
    single = SingleValueAddress("12 Galle Rd Colombo")
    struct = structured(("line", "12 Galle Rd"), ("city", "Colombo"))
    results = address_scores([single, struct])
    assert [r.score for r in results] == [1.0, 1.0]
    assert results[0].mode == "single_value"


def test_house_numbers_count():
    a, b = SingleValueAddress("12 Galle Rd"), SingleValueAddress("14 Galle Rd")
    assert address_score(0, [a, b]) == pytest.approx((2 / 4 + 2 / 4) / 2)


def test_gates_only_without_text():
    a = structured(("country", "LK"))
    assert [address_score(k, [a, a, a]) for k in range(3)] == [1.0, 1.0, 1.0]


def test_address_needs_two_carriers():
    a = structured(("country", "LK"))
    assert address_scores([a, None]) == [None, None]


@given(st.lists(st.sampled_from("ABC"), min_size=2, max_size=9), st.randoms(use_true_random=False))
def test_candidate_properties(values, rnd):
    scores, candidate = candidate_scores(values)
    counts = Counter(values)
    top = max(counts.values())
    assert counts[candidate.value] == top
    assert all(s in (0.0, 1.0) for s in scores)
    leaders = [v for v, c in counts.items() if c == top]
    if len(leaders) == 1:
        if top * 2 > len(values):
            assert scores.count(0.0) <= -(-len(values) // 2)
        shuffled = list(values)
        rnd.shuffle(shuffled)
        reshuffled, again = candidate_scores(shuffled)
        assert again.value == candidate.value
        assert [s for v, s in sorted(zip(shuffled, reshuffled))] == [s for v, s in sorted(zip(values, scores))]


def test_all_agree_all_score_one():
    rng = random.Random(3)
    for _ in range(50):
        value = rng.choice(["x", "y"])
        values = [value] * rng.randint(2, 6)
        assert candidate_scores(values)[0] == [1.0] * len(values)
