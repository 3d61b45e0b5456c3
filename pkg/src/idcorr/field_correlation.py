"""Exact-match attribute scores against a majority-vote candidate, and addresses.

Date of birth, gender and NIC score 1 for documents agreeing with the
plurality value and 0 otherwise.  Addresses pass through hierarchical level
gates (country down to city) before their free text is scored like a name.
"""

from __future__ import annotations

import csv
import enum
import unicodedata
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Hashable, Optional, Sequence

from .extraction import (
    ADDRESS_LEVELS,
    AddressValue,
    DobValue,
    SingleValueAddress,
    StructuredAddress,
    canonical_nic,
)
from .name_correlation import NameProfile, exact_mean, pairwise_name_score, word_profile


@dataclass(frozen=True)
class Candidate:
    value: Hashable
    vote_count: int
    first_index: int = 0


def majority_candidate(values: Sequence[Hashable]) -> Candidate:
    """Most frequent value; ties go to the value seen first."""
    if not values:
        raise ValueError("majority vote over no values")
    counts = Counter(values)
    best = max(counts.values())
    for index, value in enumerate(values):
        if counts[value] == best:
            return Candidate(value, best, index)
    raise AssertionError("unreachable")


def candidate_scores(values: Sequence[Optional[Hashable]]) -> tuple[list[Optional[float]], Optional[Candidate]]:
    """Score every carrier 1/0 against the candidate of the carried values.

    Documents with ``None`` are not carriers.  With fewer than two carriers
    every cell is ``None`` and there is no candidate.
    """
    carried = [v for v in values if v is not None]
    if len(carried) < 2:
        return [None] * len(values), None
    candidate = majority_candidate(carried)
    return [None if v is None else float(v == candidate.value) for v in values], candidate


def dob_score(k: int, dobs: Sequence[Optional[DobValue]]) -> Optional[float]:
    return candidate_scores(dobs)[0][k]


class GenderClass(enum.Enum):
    CLASS1 = "female"
    CLASS2 = "male"
    UNCLASSIFIED = "unclassified"

    __hash__ = object.__hash__  # singletons; cheaper than the default when voting


_GENDER_TARGETS = {
    "f": GenderClass.CLASS1,
    "female": GenderClass.CLASS1,
    "m": GenderClass.CLASS2,
    "male": GenderClass.CLASS2,
}


def classify_gender(raw: str) -> GenderClass:
    return _GENDER_TARGETS.get(raw.strip().lower(), GenderClass.UNCLASSIFIED)


def gender_classes(genders: Sequence[Optional[str]]) -> list[Optional[GenderClass]]:
    """Classes per document, with unclassifiable values treated as absent."""
    classes = []
    for raw in genders:
        cls = None if raw is None else classify_gender(raw)
        classes.append(None if cls is GenderClass.UNCLASSIFIED else cls)
    return classes


def gender_score(k: int, genders: Sequence[Optional[str]]) -> Optional[float]:
    return candidate_scores(gender_classes(genders))[0][k]


def nic_score(k: int, nics: Sequence[Optional[str]]) -> Optional[float]:
    return candidate_scores([None if n is None else canonical_nic(n) for n in nics])[0][k]


def _normalize_text(text: str) -> str:
    decomposed = unicodedata.normalize("NFKD", text)
    stripped = "".join(c for c in decomposed if not unicodedata.combining(c))
    return " ".join(stripped.casefold().replace(".", " ").split())


@lru_cache(maxsize=1)
def country_table() -> dict[str, str]:
    """Normalized country name, alpha-2 and alpha-3 code -> alpha-2 code."""
    lookup = {}
    with resources.files("idcorr").joinpath("data/countries.csv").open(encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            alpha2 = row["alpha2"]
            for key in (row["name"], row["alpha2"], row["alpha3"]):
                lookup[_normalize_text(key)] = alpha2
    return lookup


def canonical_country(text: str) -> str:
    normalized = _normalize_text(text)
    return country_table().get(normalized, normalized)


def country_equivalent(a: str, b: str) -> bool:
    """Equal names, or names and codes of the same ISO 3166-1 entry."""
    return _normalize_text(a) == _normalize_text(b) or canonical_country(a) == canonical_country(b)


@lru_cache(maxsize=4096)
def canonical_level(level: str, text: str) -> str:
    if level == "country":
        return canonical_country(text)
    if level == "zipcode":
        return "".join(text.split()).casefold()
    return _normalize_text(text)


def _text_profile(text: str, doc_id: str) -> NameProfile:
    return word_profile(text.split(), doc_id, keep_numbers=True)


def _text_pairwise(p: NameProfile, q: NameProfile) -> float:
    # neither side has free text: nothing left to disagree on
    if not p.units and not q.units:
        return 1.0
    score = pairwise_name_score(p, q)
    return 0.0 if score is None else score


@dataclass
class AddressResult:
    score: float
    mode: str
    failed_level: Optional[str] = None
    gated_levels: tuple[str, ...] = ()
    pairs: Optional[dict[int, float]] = None


def address_scores(
    addresses: Sequence[Optional[AddressValue]], doc_ids: Optional[Sequence[str]] = None
) -> list[Optional[AddressResult]]:
    """Address result for every document; ``None`` for non-carriers.

    When every carrier is structured, each level present in all carriers is a
    gate: a document disagreeing with the level's candidate scores 0.  The
    rest of each address (lines plus levels not shared by all) is then scored
    pairwise like a name.  If any carrier is a single value, every address is
    rendered as text in document order and scored that way directly.
    """
    n = len(addresses)
    doc_ids = list(doc_ids) if doc_ids is not None else [str(i) for i in range(n)]
    carriers = [i for i, a in enumerate(addresses) if a is not None]
    results: list[Optional[AddressResult]] = [None] * n
    if len(carriers) < 2:
        return results

    structured = all(isinstance(addresses[i], StructuredAddress) for i in carriers)
    failed: dict[int, str] = {}
    gated: list[str] = []
    texts: dict[int, str] = {}
    if structured:
        levels = {i: addresses[i].levels for i in carriers}
        shared = [lv for lv in ADDRESS_LEVELS if all(lv in levels[i] for i in carriers)]
        for level in shared:
            keys = {i: canonical_level(level, levels[i][level]) for i in carriers}
            candidate = majority_candidate([keys[i] for i in carriers])
            gated.append(level)
            for i in carriers:
                if i not in failed and keys[i] != candidate.value:
                    failed[i] = level
        for i in carriers:
            texts[i] = " ".join(text for label, text in addresses[i].parts if label not in shared)
        mode = "structured"
    else:
        for i in carriers:
            texts[i] = addresses[i].render()
        mode = "single_value"

    profiles = {i: _text_profile(texts[i], doc_ids[i]) for i in carriers}
    no_text = all(not p.units for p in profiles.values())
    memo: dict[tuple[int, int], float] = {}  # pair scores are symmetric
    for k in carriers:
        if k in failed:
            results[k] = AddressResult(0.0, mode, failed[k], tuple(gated))
            continue
        if no_text:
            results[k] = AddressResult(1.0, mode, None, tuple(gated), {})
            continue
        pairs = {}
        for i in carriers:
            if i != k:
                key = (min(i, k), max(i, k))
                if key not in memo:
                    memo[key] = _text_pairwise(profiles[k], profiles[i])
                pairs[i] = memo[key]
        results[k] = AddressResult(exact_mean(list(pairs.values())), mode, None, tuple(gated), pairs)
    return results


def address_score(k: int, addresses: Sequence[Optional[AddressValue]]) -> Optional[float]:
    result = address_scores(addresses)[k]
    return None if result is None else result.score


__all__ = [
    "Candidate",
    "GenderClass",
    "SingleValueAddress",
    "StructuredAddress",
    "address_score",
    "address_scores",
    "candidate_scores",
    "canonical_country",
    "classify_gender",
    "country_equivalent",
    "dob_score",
    "gender_score",
    "majority_candidate",
    "nic_score",
]
