"""Phonetic codes and normalized string similarity measures.

Every similarity here returns a value in [0, 1], is symmetric in its two
arguments, and returns 1.0 for identical inputs.
"""

from __future__ import annotations

import enum
import math
import re
import unicodedata
from collections import Counter
from functools import lru_cache

from .errors import PhoneticError

_SOUNDEX_DIGITS = {
    **dict.fromkeys("BFPV", "1"),
    **dict.fromkeys("CGJKQSXZ", "2"),
    **dict.fromkeys("DT", "3"),
    "L": "4",
    **dict.fromkeys("MN", "5"),
    "R": "6",
}
_NOT_ASCII_UPPER = re.compile("[^A-Z]+")
_SEPARATORS = frozenset("HW")  # transparent: codes on either side merge


def ascii_letters(word: str) -> str:
    """Uppercase ASCII letters of ``word`` with diacritics stripped; others dropped."""
    decomposed = unicodedata.normalize("NFKD", word)
    return _NOT_ASCII_UPPER.sub("", decomposed.upper())


@lru_cache(maxsize=8192)
def soundex(word: str) -> str:
    """American Soundex code of ``word``, e.g. ``"Ashcraft"`` -> ``"A261"``.

    Letters separated only by H or W count as adjacent and are coded once;
    a vowel (A E I O U Y) between two equal codes keeps both.  Raises
    :class:`PhoneticError` when ``word`` has no letters.
    """
    letters = ascii_letters(word)
    if not letters:
        raise PhoneticError(f"no letters to encode in {word!r}")
    first = letters[0]
    digits = []
    prev = _SOUNDEX_DIGITS.get(first, "")
    for ch in letters[1:]:
        if ch in _SEPARATORS:
            continue
        code = _SOUNDEX_DIGITS.get(ch, "")
        if code and code != prev:
            digits.append(code)
            if len(digits) == 3:
                break
        prev = code
    return first + "".join(digits).ljust(3, "0")


def levenshtein_distance(a: str, b: str) -> int:
    """Unit-cost insert/delete/substitute edit distance.

    Bit-parallel formulation (Myers, Hyyro): one DP column per character of
    the longer string, held as bit vectors of vertical +1/-1 deltas.
    """
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    m = len(b)
    if m == 0:
        return len(a)
    peq: dict[str, int] = {}
    for i, c in enumerate(b):
        peq[c] = peq.get(c, 0) | (1 << i)
    mask = (1 << m) - 1
    high = 1 << (m - 1)
    pv, mv, score = mask, 0, m
    for c in a:
        eq = peq.get(c, 0)
        xv = eq | mv
        xh = (((eq & pv) + pv) ^ pv) | eq
        ph = mv | (~(xh | pv) & mask)
        mh = pv & xh
        if ph & high:
            score += 1
        elif mh & high:
            score -= 1
        ph = ((ph << 1) | 1) & mask
        mh = (mh << 1) & mask
        pv = mh | (~(xv | ph) & mask)
        mv = ph & xv
    return score


@lru_cache(maxsize=65536)
def levenshtein_similarity(a: str, b: str) -> float:
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein_distance(a, b) / longest


def lcs_length(a: str, b: str) -> int:
    previous = [0] * (len(b) + 1)
    for ca in a:
        current = [0]
        for j, cb in enumerate(b, 1):
            if ca == cb:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def metric_lcs_similarity(a: str, b: str) -> float:
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return lcs_length(a, b) / longest


def bigrams(s: str) -> Counter:
    return Counter(s[i : i + 2] for i in range(len(s) - 1))


def cosine_similarity(a: str, b: str) -> float:
    if a == b:
        return 1.0
    pa, pb = bigrams(a), bigrams(b)
    if not pa or not pb:
        return 0.0
    dot = sum(count * pb[gram] for gram, count in pa.items())
    norm = math.sqrt(sum(v * v for v in pa.values())) * math.sqrt(sum(v * v for v in pb.values()))
    return min(1.0, dot / norm)


def jaccard_similarity(a: str, b: str) -> float:
    if a == b:
        return 1.0
    sa, sb = set(bigrams(a)), set(bigrams(b))
    union = sa | sb
    if not union:
        return 0.0
    return len(sa & sb) / len(union)


def sorensen_dice_similarity(a: str, b: str) -> float:
    if a == b:
        return 1.0
    sa, sb = set(bigrams(a)), set(bigrams(b))
    if not sa and not sb:
        return 0.0
    return 2 * len(sa & sb) / (len(sa) + len(sb))


def _jaro(a: str, b: str) -> float:
    if not a or not b:
        return 0.0
    window = max(max(len(a), len(b)) // 2 - 1, 0)
    matched_b = [False] * len(b)
    a_matches = []
    for i, ca in enumerate(a):
        lo, hi = max(0, i - window), min(len(b), i + window + 1)
        for j in range(lo, hi):
            if not matched_b[j] and b[j] == ca:
                matched_b[j] = True
                a_matches.append(ca)
                break
    m = len(a_matches)
    if m == 0:
        return 0.0
    b_matches = [cb for cb, used in zip(b, matched_b) if used]
    transpositions = sum(x != y for x, y in zip(a_matches, b_matches)) / 2
    return (m / len(a) + m / len(b) + (m - transpositions) / m) / 3


def jaro_winkler_similarity(a: str, b: str, prefix_scale: float = 0.1, max_prefix: int = 4) -> float:
    if a == b:
        return 1.0
    # greedy matching can depend on argument order; fix it
    if b < a:
        a, b = b, a
    jaro = _jaro(a, b)
    prefix = 0
    for ca, cb in zip(a[:max_prefix], b[:max_prefix]):
        if ca != cb:
            break
        prefix += 1
    return jaro + prefix * prefix_scale * (1.0 - jaro)


def two_gram_similarity(a: str, b: str) -> float:
    """Positional bigram similarity with a one-character start pad.

    Edit-distance recurrence over the bigram sequences of both strings; a
    substitution costs the fraction of differing characters in the two
    bigrams, ignoring agreement on the pad.  Normalized by the longer length.
    """
    if a == b:
        return 1.0
    if not a or not b:
        return 0.0
    pad = "\0"
    pa, pb = pad + a, pad + b
    previous = [float(i) for i in range(len(a) + 1)]
    for j in range(1, len(b) + 1):
        gb = pb[j - 1 : j + 1]
        current = [float(j)]
        for i in range(1, len(a) + 1):
            ga = pa[i - 1 : i + 1]
            differing = 0
            counted = 2
            for x, y in zip(ga, gb):
                if x != y:
                    differing += 1
                elif x == pad:
                    counted -= 1
            current.append(
                min(current[i - 1] + 1, previous[i] + 1, previous[i - 1] + differing / counted)
            )
        previous = current
    return max(0.0, 1.0 - previous[-1] / max(len(a), len(b)))


class SimilarityMeasure(enum.Enum):
    COSINE = "cosine"
    JACCARD = "jaccard"
    JARO_WINKLER = "jaro_winkler"
    METRIC_LCS = "metric_lcs"
    NORMALIZED_LEVENSHTEIN = "normalized_levenshtein"
    SORENSEN_DICE = "sorensen_dice"
    TWO_GRAM = "two_gram"


_MEASURES = {
    SimilarityMeasure.COSINE: cosine_similarity,
    SimilarityMeasure.JACCARD: jaccard_similarity,
    SimilarityMeasure.JARO_WINKLER: jaro_winkler_similarity,
    SimilarityMeasure.METRIC_LCS: metric_lcs_similarity,
    SimilarityMeasure.NORMALIZED_LEVENSHTEIN: levenshtein_similarity,
    SimilarityMeasure.SORENSEN_DICE: sorensen_dice_similarity,
    SimilarityMeasure.TWO_GRAM: two_gram_similarity,
}


def similarity(measure: SimilarityMeasure | str, a: str, b: str) -> float:
    return _MEASURES[SimilarityMeasure(measure)](a, b)
