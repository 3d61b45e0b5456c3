"""Score a document set: extract, score each super attribute, average per document."""

from __future__ import annotations

import warnings
from enum import Enum
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .document_model import DocumentSet, IdentityDocument
from .errors import ScoringWarning, UsageError
from .extraction import (
    DEFAULT_DICTIONARY,
    AttributeDictionary,
    ExtractedProfile,
    SuperAttribute,
    canonical_nic,
    extract,
)
from .field_correlation import address_scores, candidate_scores, gender_classes
from .name_correlation import build_profile, exact_mean, pairwise_name_score

ATTRIBUTES = tuple(SuperAttribute)


@dataclass(frozen=True)
class Cell:
    score: float
    details: dict = field(default_factory=dict)


@dataclass
class ScoreMatrix:
    """Documents x super attributes; a missing cell means the attribute is absent."""

    doc_ids: tuple[str, ...]
    cells: dict[tuple[str, SuperAttribute], Cell] = field(default_factory=dict)
    absent_reasons: dict[tuple[str, SuperAttribute], str] = field(default_factory=dict)

    def get(self, doc_id: str, attribute: SuperAttribute) -> Optional[Cell]:
        return self.cells.get((doc_id, attribute))

    def score(self, doc_id: str, attribute: SuperAttribute) -> Optional[float]:
        cell = self.get(doc_id, attribute)
        return None if cell is None else cell.score

    def row(self, doc_id: str) -> dict[SuperAttribute, Optional[float]]:
        return {a: self.score(doc_id, a) for a in ATTRIBUTES}

    def column(self, attribute: SuperAttribute) -> list[Optional[float]]:
        return [self.score(d, attribute) for d in self.doc_ids]


@dataclass(frozen=True)
class DocumentScore:
    doc_id: str
    score: Optional[float]
    attributes_used: tuple[SuperAttribute, ...]

    @property
    def defined(self) -> bool:
        return self.score is not None


def _label(value) -> str:
    return value.value if isinstance(value, Enum) else str(value)


def _name_column(profiles: Sequence[ExtractedProfile]) -> list[Optional[Cell]]:
    names = [
        None if p.name is None else build_profile(p.name, p.doc_id)
        for p in profiles
    ]
    names = [n if n is not None and n.units else None for n in names]
    memo: dict[tuple[int, int], Optional[float]] = {}  # pair scores are symmetric
    cells: list[Optional[Cell]] = []
    for k, mine in enumerate(names):
        if mine is None:
            cells.append(None)
            continue
        pairs = {}
        for i, other in enumerate(names):
            if i != k and other is not None:
                key = (min(i, k), max(i, k))
                if key not in memo:
                    memo[key] = pairwise_name_score(mine, other)
                pairs[profiles[i].doc_id] = memo[key]
        if not pairs:
            cells.append(None)
            continue
        details = {
            "value": " ".join([u.text for u in mine.units]),
            "codes": [u.code or u.text for u in mine.units],
            "pairs": pairs,
        }
        cells.append(Cell(exact_mean(list(pairs.values())), details))
    return cells


def _candidate_column(values: Sequence, shown: Sequence[Optional[str]]) -> list[Optional[Cell]]:
    scores, candidate = candidate_scores(values)
    carriers = sum(v is not None for v in values)
    shown_candidate = None if candidate is None else _label(candidate.value)
    cells: list[Optional[Cell]] = []
    for value, label, score in zip(values, shown, scores):
        if score is None:
            cells.append(None)
            continue
        cells.append(
            Cell(
                score,
                {
                    "value": label,
                    "candidate": shown_candidate,
                    "votes": candidate.vote_count,
                    "carriers": carriers,
                },
            )
        )
    return cells


def _address_column(profiles: Sequence[ExtractedProfile]) -> list[Optional[Cell]]:
    ids = [p.doc_id for p in profiles]
    results = address_scores([p.address for p in profiles], ids)
    cells: list[Optional[Cell]] = []
    for profile, result in zip(profiles, results):
        if result is None:
            cells.append(None)
            continue
        details = {"value": profile.address.render(), "mode": result.mode, "gated_levels": list(result.gated_levels)}
        if result.failed_level is not None:
            details["failed_level"] = result.failed_level
        if result.pairs is not None:
            details["pairs"] = {ids[i]: s for i, s in result.pairs.items()}
        cells.append(Cell(result.score, details))
    return cells


def score_profiles(profiles: Sequence[ExtractedProfile]) -> tuple[ScoreMatrix, list[DocumentScore]]:
    """Assemble the score matrix and per-document scores from extracted profiles."""
    if len(profiles) < 2:
        raise UsageError(f"need at least 2 documents to score, got {len(profiles)}")
    doc_ids = tuple(p.doc_id for p in profiles)
    genders = gender_classes([p.gender for p in profiles])
    # ISO text is equal exactly when the dates are, and votes cheaper
    dobs = [None if p.dob is None else str(p.dob) for p in profiles]
    nics = [None if p.nic is None else canonical_nic(p.nic) for p in profiles]
    columns = {
        SuperAttribute.NAME: _name_column(profiles),
        SuperAttribute.DATE_OF_BIRTH: _candidate_column(dobs, dobs),
        SuperAttribute.GENDER: _candidate_column(genders, [p.gender for p in profiles]),
        SuperAttribute.ADDRESS: _address_column(profiles),
        SuperAttribute.NIC: _candidate_column(nics, [p.nic for p in profiles]),
    }
    matrix = ScoreMatrix(doc_ids)
    for attribute, cells in columns.items():
        for profile, cell, gender in zip(profiles, cells, genders):
            key = (profile.doc_id, attribute)
            if cell is not None:
                matrix.cells[key] = cell
            elif profile.get(attribute) is None:
                matrix.absent_reasons[key] = "not carried"
            elif attribute is SuperAttribute.GENDER and gender is None:
                matrix.absent_reasons[key] = "unclassified value"
            else:
                matrix.absent_reasons[key] = "fewer than 2 carriers"

    scores = []
    for doc_id in doc_ids:
        used = tuple([a for a in ATTRIBUTES if (doc_id, a) in matrix.cells])
        if used:
            value = exact_mean([matrix.cells[(doc_id, a)].score for a in used])
        else:
            value = None
            warnings.warn(f"{doc_id}: no attribute could be scored", ScoringWarning, stacklevel=2)
        scores.append(DocumentScore(doc_id, value, used))
    return matrix, scores


def score_set(
    docs: Iterable[IdentityDocument], dictionary: AttributeDictionary = DEFAULT_DICTIONARY
) -> tuple[ScoreMatrix, list[DocumentScore]]:
    """Correlation scores for every document of ``docs`` against the rest."""
    docs = DocumentSet(docs)
    if len(docs) < 2:
        raise UsageError(f"need at least 2 documents to score, got {len(docs)}")
    return score_profiles([extract(doc, dictionary) for doc in docs])
