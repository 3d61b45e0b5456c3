"""Phonetic name matching between documents and the per-document name score.

A profile is the ordered list of a document's name units: single-letter
initials and phonetically coded segments.  Two profiles are aligned one to
one, then scored by how many matched units keep their relative order (order
similarity) and by how closely the matched texts agree (string similarity),
both over the number of distinct units across the pair.
"""

from __future__ import annotations

import bisect
import functools
import math
import sys
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import PhoneticError, ScoringWarning
from .extraction import INITIALS_KEY, NameValue
from .text_metrics import ascii_letters, levenshtein_similarity, soundex

_NORMAL_MIN = 2 * sys.float_info.min

PHONETIC = "phonetic"
INITIAL = "initial"


@dataclass(frozen=True)
class NameUnit:
    text: str
    code: Optional[str]  # None for initials

    @property
    def is_initial(self) -> bool:
        return self.code is None

    @property
    def first_letter(self) -> str:
        return self.text if self.code is None else self.code[0]


@dataclass(frozen=True)
class NameProfile:
    doc_id: str
    units: tuple[NameUnit, ...]

    @property
    def segments(self) -> list[tuple[str, str]]:
        return [(u.text, u.code) for u in self.units if not u.is_initial]

    @property
    def initials(self) -> list[str]:
        return [u.text for u in self.units if u.is_initial]

    def __len__(self):
        return len(self.units)


@dataclass(frozen=True)
class SegmentAlignment:
    """One-to-one matching of unit positions ``(i, j)`` with the kind of each match."""

    pairs: tuple[tuple[int, int], ...]
    kinds: tuple[str, ...]

    def __len__(self):
        return len(self.pairs)


@functools.lru_cache(maxsize=8192)
def _comparable(text: str) -> str:
    return "".join(filter(str.isalnum, text.casefold()))


@functools.lru_cache(maxsize=8192)
def _coded_unit(text: str, keep_numbers: bool) -> Optional[NameUnit]:
    try:
        return NameUnit(text, soundex(text))
    except PhoneticError:
        digits = "".join(c for c in text if c.isdigit())
        return NameUnit(text, digits) if keep_numbers and digits else None


def _append_coded(units: list[NameUnit], text: str, doc_id: str, keep_numbers: bool) -> None:
    unit = _coded_unit(text, keep_numbers)
    if unit is None:
        warnings.warn(f"{doc_id}: segment {text!r} has no letters; skipped", ScoringWarning, stacklevel=3)
    else:
        units.append(unit)


def build_profile(name: NameValue, doc_id: str = "", keep_numbers: bool = False) -> NameProfile:
    """Encode each segment of ``name``; initials become single uppercase letters.

    Segments without letters are skipped with a :class:`ScoringWarning`,
    unless ``keep_numbers`` is set, in which case their digits are kept as
    an exact-match code (used for address text, where house numbers count).
    """
    if not name.segments:
        raise ValueError("cannot build a profile from an empty name")
    units = []
    for segment in name.segments:
        if segment.source_key == INITIALS_KEY:
            units.extend(NameUnit(letter, None) for letter in ascii_letters(segment.text))
            continue
        _append_coded(units, segment.text, doc_id, keep_numbers)
    return NameProfile(doc_id, tuple(units))


def word_profile(words: Sequence[str], doc_id: str = "", keep_numbers: bool = False) -> NameProfile:
    """Profile of plain words, none of them initials; may be empty."""
    units: list[NameUnit] = []
    for word in words:
        _append_coded(units, word, doc_id, keep_numbers)
    return NameProfile(doc_id, tuple(units))


def align(p: NameProfile, q: NameProfile) -> SegmentAlignment:
    """Match units of ``p`` to units of ``q``.

    Phonetic codes are paired first, left to right, each unit used once.
    Then the remaining initials of either side are paired left to right with
    remaining segments of the other side starting with that letter, and
    finally leftover initials with equal leftover initials.
    """
    pu, qu = p.units, q.units
    used_p = [False] * len(pu)
    used_q = [False] * len(qu)
    p_segs = [i for i, u in enumerate(pu) if u.code is not None]
    q_segs = [j for j, v in enumerate(qu) if v.code is not None]
    p_inits = [i for i, u in enumerate(pu) if u.code is None]
    q_inits = [j for j, v in enumerate(qu) if v.code is None]
    pairs: list[tuple[int, int]] = []
    kinds: list[str] = []

    def link(i, j, kind):
        used_p[i] = used_q[j] = True
        pairs.append((i, j))
        kinds.append(kind)

    for i in p_segs:
        code = pu[i].code
        for j in q_segs:
            if not used_q[j] and qu[j].code == code:
                link(i, j, PHONETIC)
                break
    for i in p_inits:
        letter = pu[i].text
        for j in q_segs:
            if not used_q[j] and qu[j].code[0] == letter:
                link(i, j, INITIAL)
                break
    for j in q_inits:
        letter = qu[j].text
        for i in p_segs:
            if not used_p[i] and pu[i].code[0] == letter:
                link(i, j, INITIAL)
                break
    for i in p_inits:
        if used_p[i]:
            continue
        letter = pu[i].text
        for j in q_inits:
            if not used_q[j] and qu[j].text == letter:
                link(i, j, INITIAL)
                break

    if not pairs:
        return SegmentAlignment((), ())
    # pairs are unique, so kinds never take part in the comparison
    ordered_pairs, ordered_kinds = zip(*sorted(zip(pairs, kinds)))
    return SegmentAlignment(ordered_pairs, ordered_kinds)


def in_order_matches(alignment: SegmentAlignment) -> int:
    """Size of the largest subset of pairs increasing in both positions."""
    tails: list[int] = []
    for _, j in sorted(alignment.pairs):
        k = bisect.bisect_left(tails, j)
        if k == len(tails):
            tails.append(j)
        else:
            tails[k] = j
    return len(tails)


def union_size(alignment: SegmentAlignment, p: NameProfile, q: NameProfile) -> int:
    """Distinct units across the pair: every unit, counting each match once."""
    return len(p.units) + len(q.units) - len(alignment.pairs)


def _denominator(alignment, p, q) -> int:
    total = union_size(alignment, p, q)
    if total == 0:
        raise ValueError("both name profiles are empty")
    return total


def order_similarity(alignment: SegmentAlignment, p: NameProfile, q: NameProfile) -> float:
    return in_order_matches(alignment) / _denominator(alignment, p, q)


def string_similarity(alignment: SegmentAlignment, p: NameProfile, q: NameProfile) -> float:
    scores = []
    for (i, j), kind in zip(alignment.pairs, alignment.kinds):
        if kind == INITIAL:
            scores.append(1.0)
        else:
            a, b = _comparable(p.units[i].text), _comparable(q.units[j].text)
            scores.append(levenshtein_similarity(a, b))
    return exact_ratio(scores, _denominator(alignment, p, q))


def pairwise_name_score(p: NameProfile, q: NameProfile) -> Optional[float]:
    """Mean of order and string similarity; ``None`` when either profile is empty."""
    if not p.units or not q.units:
        return None
    if q.doc_id < p.doc_id:
        p, q = q, p
    alignment = align(p, q)
    return exact_mean([order_similarity(alignment, p, q), string_similarity(alignment, p, q)])


def exact_ratio(values: Sequence[float], divisor: int) -> float:
    """``sum(values) / divisor`` computed exactly, then rounded once.

    Floats are dyadic rationals, so the sum is an exact integer over a power
    of two; int / int true division rounds correctly.  The result does not
    depend on summation order.
    """
    total, scale = 0, 1
    for value in values:
        n, d = value.as_integer_ratio()
        if d > scale:
            total *= d // scale
            scale = d
        total += n * (scale // d)
    return total / (scale * divisor)


def exact_mean(values: Sequence[float]) -> float:
    """Correctly rounded arithmetic mean."""
    n = len(values)
    if n == 0:
        raise ValueError("mean of no values")
    if n == 1:
        return float(values[0])
    if n == 2:
        # halving a normal float is exact, so one rounded addition is correct
        total = values[0] + values[1]
        if _NORMAL_MIN <= abs(total) < math.inf:
            return total / 2
    return exact_ratio(values, n)


def name_score(k: int, profiles: Sequence[Optional[NameProfile]]) -> Optional[float]:
    """Mean pairwise score of document ``k`` against every other document with a name.

    ``None`` when document ``k`` has no name or fewer than two documents do.
    """
    mine = profiles[k]
    if mine is None or not mine.units:
        return None
    scores = [
        pairwise_name_score(mine, other)
        for i, other in enumerate(profiles)
        if i != k and other is not None and other.units
    ]
    if not scores:
        return None
    return exact_mean(scores)
