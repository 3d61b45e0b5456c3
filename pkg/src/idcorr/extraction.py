"""Map raw document keys to the five super attributes and extract their values."""

from __future__ import annotations

import datetime
import enum
import functools
import json
import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional, Sequence, Union

from .document_model import IdentityDocument, normalize_key
from .errors import DictionaryError, ExtractionError, ExtractionWarning


class SuperAttribute(enum.Enum):
    NAME = "name"
    DATE_OF_BIRTH = "date_of_birth"
    GENDER = "gender"
    ADDRESS = "address"
    NIC = "nic"

    # members are singletons, so identity hashing is consistent with equality
    # and much cheaper than the default for the score-matrix keys
    __hash__ = object.__hash__


ADDRESS_LEVELS = ("country", "province", "state", "zipcode", "city")
DOB_PARTS = ("day", "month", "year")

DEFAULT_NAME_KEYS = (
    "initials",
    "first_name",
    "middle_name",
    "name",
    "full_name",
    "surname",
    "other_names",
    "last_name",
)
INITIALS_KEY = "initials"


def _tokens(keys) -> tuple[str, ...]:
    return tuple(normalize_key(k) for k in keys)


@dataclass(frozen=True)
class AttributeDictionary:
    """Which normalized key tokens belong to which super attribute.

    ``name`` order is the canonical concatenation rank (1-based).
    ``address`` holds container keys; a leaf under one of them is a
    single-value address.
    """

    name: tuple[str, ...] = DEFAULT_NAME_KEYS
    date_of_birth: tuple[str, ...] = ("date_of_birth", "dob", "birth_date")
    date_of_birth_children: dict = field(
        default_factory=lambda: {"day": ("date", "day", "d"), "month": ("month", "m"), "year": ("year", "y")}
    )
    gender: tuple[str, ...] = ("gender", "sex")
    address: tuple[str, ...] = ("address",)
    address_lines: tuple[str, ...] = ("line1", "line2")
    address_levels: dict = field(default_factory=lambda: {level: (level,) for level in ADDRESS_LEVELS})
    nic: tuple[str, ...] = ("nic",)

    def __post_init__(self):
        owner: dict[str, str] = {}

        def claim(token, label):
            if token in owner and owner[token] != label:
                raise DictionaryError(f"key {token!r} listed under both {owner[token]} and {label}")
            owner[token] = label

        for label, keys in (
            ("name", self.name),
            ("date_of_birth", self.date_of_birth),
            ("gender", self.gender),
            ("address", self.address + self.address_lines + tuple(k for ks in self.address_levels.values() for k in ks)),
            ("nic", self.nic),
        ):
            for token in keys:
                claim(token, label)
        if set(self.address_levels) - set(ADDRESS_LEVELS):
            raise DictionaryError(f"unknown address levels {sorted(set(self.address_levels) - set(ADDRESS_LEVELS))}")
        if set(self.date_of_birth_children) - set(DOB_PARTS):
            raise DictionaryError(f"unknown date parts {sorted(set(self.date_of_birth_children) - set(DOB_PARTS))}")
        children: dict[str, str] = {}
        for part, keys in self.date_of_birth_children.items():
            for token in keys:
                if token in children:
                    raise DictionaryError(f"date key {token!r} listed under both {children[token]} and {part}")
                children[token] = part
        object.__setattr__(self, "_lookup", owner)
        object.__setattr__(self, "_dob_children", children)
        object.__setattr__(self, "_name_rank", {k: i for i, k in enumerate(self.name, 1)})
        object.__setattr__(self, "_path_cache", {})
        level_of = {k: level for level, ks in self.address_levels.items() for k in ks}
        object.__setattr__(self, "_level_of", level_of)

    @property
    def unranked(self) -> int:
        """Rank given to name keys outside the canonical list; sorts after all."""
        return len(self.name) + 1

    @classmethod
    def from_mapping(cls, data: dict) -> "AttributeDictionary":
        known = {
            "name",
            "date_of_birth",
            "date_of_birth_children",
            "gender",
            "address",
            "address_lines",
            "address_levels",
            "nic",
        }
        unknown = set(data) - known
        if unknown:
            raise DictionaryError(f"unknown dictionary fields: {sorted(unknown)}")
        kwargs = {}
        try:
            for key in ("name", "date_of_birth", "gender", "address", "address_lines", "nic"):
                if key in data:
                    kwargs[key] = _tokens(data[key])
            for key in ("date_of_birth_children", "address_levels"):
                if key in data:
                    kwargs[key] = {part: _tokens(keys) for part, keys in data[key].items()}
        except (TypeError, AttributeError, ValueError) as exc:
            raise DictionaryError(f"malformed dictionary: {exc}") from None
        return cls(**kwargs)

    @classmethod
    def load(cls, path: str | Path) -> "AttributeDictionary":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise DictionaryError(f"{path}: {exc}") from None
        if not isinstance(data, dict):
            raise DictionaryError(f"{path}: top level must be an object")
        return cls.from_mapping(data)


DEFAULT_DICTIONARY = AttributeDictionary()


class KeyMatch(NamedTuple):
    """Classification of one key path.

    ``detail`` is the canonical rank for names, the date part (or ``None``
    for a whole date) for dates of birth, and for addresses one of the level
    names, ``"line"``, or ``"address"`` for a bare container leaf.
    """

    attribute: SuperAttribute
    detail: Union[int, str, None] = None


def classify_key(key_path: Sequence[str], dictionary: AttributeDictionary = DEFAULT_DICTIONARY) -> Optional[KeyMatch]:
    """Classify a normalized key path, deepest token first, then its parents."""
    d = dictionary
    if not key_path:
        return None
    leaf = key_path[-1]
    owner = d._lookup.get(leaf)
    if owner == "name":
        return KeyMatch(SuperAttribute.NAME, d._name_rank[leaf])
    if owner == "date_of_birth":
        return KeyMatch(SuperAttribute.DATE_OF_BIRTH, None)
    if owner == "gender":
        return KeyMatch(SuperAttribute.GENDER)
    if owner == "nic":
        return KeyMatch(SuperAttribute.NIC)
    if owner == "address":
        if leaf in d._level_of:
            return KeyMatch(SuperAttribute.ADDRESS, d._level_of[leaf])
        if leaf in d.address_lines:
            return KeyMatch(SuperAttribute.ADDRESS, "line")
        return KeyMatch(SuperAttribute.ADDRESS, "address")
    for parent in reversed(key_path[:-1]):
        owner = d._lookup.get(parent)
        if owner is None:
            continue
        if owner == "date_of_birth":
            part = d._dob_children.get(leaf)
            return KeyMatch(SuperAttribute.DATE_OF_BIRTH, part) if part else None
        if owner == "name":
            return KeyMatch(SuperAttribute.NAME, d.unranked)
        if owner == "address":
            return KeyMatch(SuperAttribute.ADDRESS, "line")
        if owner == "gender":
            return KeyMatch(SuperAttribute.GENDER)
        if owner == "nic":
            return KeyMatch(SuperAttribute.NIC)
    return None


@dataclass(frozen=True)
class NameSegment:
    text: str
    source_key: str
    rank: int


@dataclass(frozen=True)
class NameValue:
    segments: tuple[NameSegment, ...]
    has_initials: bool = False

    def __str__(self):
        return " ".join(s.text for s in self.segments)


@dataclass(frozen=True, order=True)
class DobValue:
    year: int
    month: int
    day: int

    def __post_init__(self):
        datetime.date(self.year, self.month, self.day)

    def __str__(self):
        return f"{self.year:04d}-{self.month:02d}-{self.day:02d}"


@dataclass(frozen=True)
class StructuredAddress:
    """Address built from child keys; ``parts`` keeps document order."""

    parts: tuple[tuple[str, str], ...]

    @property
    def levels(self) -> dict[str, str]:
        return {label: text for label, text in self.parts if label in ADDRESS_LEVELS}

    @property
    def lines(self) -> list[str]:
        return [text for label, text in self.parts if label == "line"]

    def render(self) -> str:
        return " ".join([text for _, text in self.parts])


@dataclass(frozen=True)
class SingleValueAddress:
    text: str

    def render(self) -> str:
        return self.text


AddressValue = Union[StructuredAddress, SingleValueAddress]


@dataclass(frozen=True)
class ExtractedProfile:
    doc_id: str
    name: Optional[NameValue] = None
    dob: Optional[DobValue] = None
    gender: Optional[str] = None
    address: Optional[AddressValue] = None
    nic: Optional[str] = None

    def get(self, attribute: SuperAttribute):
        return {
            SuperAttribute.NAME: self.name,
            SuperAttribute.DATE_OF_BIRTH: self.dob,
            SuperAttribute.GENDER: self.gender,
            SuperAttribute.ADDRESS: self.address,
            SuperAttribute.NIC: self.nic,
        }[attribute]


@functools.lru_cache(maxsize=8192)
def _split_name_value(text: str, key: str, rank: int) -> tuple[NameSegment, ...]:
    tokens = [c for c in text if c.isalpha()] if key == INITIALS_KEY else text.split()
    return tuple(NameSegment(token, key, rank) for token in tokens)


def order_name_segments(
    raw: Sequence[tuple[str, str, int]], dictionary: AttributeDictionary = DEFAULT_DICTIONARY
) -> NameValue:
    """Split name values into single-token segments and sort them canonically.

    ``raw`` holds ``(text, normalized_key, document_position)``.  Segments sort
    stably by (canonical rank, document position); keys outside the name list
    come last in document order.  An initials value yields one segment per
    letter, so ``"B. C."`` and ``"B.C."`` both give ``B``, ``C``.
    """
    if not raw:
        raise ValueError("order_name_segments needs at least one value")
    ranks = dictionary._name_rank
    unranked = dictionary.unranked
    # positions are unique, so whole values sort and keep their token order
    ordered = sorted((ranks.get(key, unranked), position, text, key) for text, key, position in raw)
    segments: list[NameSegment] = []
    for rank, _, text, key in ordered:
        segments.extend(_split_name_value(text, key, rank))
    return NameValue(tuple(segments), any(s.source_key == INITIALS_KEY for s in segments))


_MONTHS = {
    name: number
    for number, names in enumerate(
        [
            ("january", "jan"),
            ("february", "feb"),
            ("march", "mar"),
            ("april", "apr"),
            ("may",),
            ("june", "jun"),
            ("july", "jul"),
            ("august", "aug"),
            ("september", "sep", "sept"),
            ("october", "oct"),
            ("november", "nov"),
            ("december", "dec"),
        ],
        1,
    )
    for name in names
}

_DATE_FORMATS = (
    (re.compile(r"(\d{4})-(\d{1,2})-(\d{1,2})"), ("y", "m", "d")),
    (re.compile(r"(\d{1,2})/(\d{1,2})/(\d{4})"), ("d", "m", "y")),
    (re.compile(r"(\d{1,2})\.(\d{1,2})\.(\d{4})"), ("d", "m", "y")),
    (re.compile(r"(\d{1,2})\s+([A-Za-z]+)\.?,?\s+(\d{4})"), ("d", "m", "y")),
)


def _month(text: str) -> int:
    text = text.strip()
    if text.isdigit():
        return int(text)
    return _MONTHS[text.lower().rstrip(".")]


@functools.lru_cache(maxsize=4096)
def parse_date(text: str) -> DobValue:
    """Parse YYYY-MM-DD, DD/MM/YYYY, DD.MM.YYYY or ``DD Month YYYY``."""
    text = text.strip()
    for pattern, order in _DATE_FORMATS:
        match = pattern.fullmatch(text)
        if match:
            parts = dict(zip(order, match.groups()))
            try:
                return DobValue(int(parts["y"]), _month(parts["m"]), int(parts["d"]))
            except (KeyError, ValueError):
                break
    raise ValueError(f"unrecognized date {text!r}")


def _dob_from_parts(parts: dict[str, str]) -> DobValue:
    values = {}
    for part in DOB_PARTS:
        if part not in parts:
            raise ValueError(f"missing {part}")
        text = parts[part].strip()
        values[part] = _month(text) if part == "month" else int(text)
    return DobValue(values["year"], values["month"], values["day"])


def _check_single(doc_id, label, found, value, canonical=lambda v: v):
    if found is not None and canonical(found) != canonical(value):
        raise ExtractionError(f"document {doc_id!r} has conflicting {label} values {found!r} and {value!r}")
    return value if found is None else found


def canonical_nic(raw: str) -> str:
    return "".join(raw.split()).upper()


_PATH_CACHE_SIZE = 4096


def extract(doc: IdentityDocument, dictionary: AttributeDictionary = DEFAULT_DICTIONARY) -> ExtractedProfile:
    """Pull the five super attribute values out of ``doc``.

    An unusable date of birth is reported with :class:`ExtractionWarning` and
    left absent.  Two different values for a scalar attribute in the same
    document raise :class:`ExtractionError`.
    """
    name_raw = []
    dob_parts: dict[tuple, dict[str, str]] = {}
    dob_values: list[DobValue] = []
    gender = nic = None
    address_parts: list[tuple[str, str]] = []
    levels_seen: dict[str, str] = {}

    cache = dictionary._path_cache
    for position, (path, value) in enumerate(doc.leaves):
        hit = cache.get(path)
        if hit is None:
            tokens = tuple(normalize_key(k) for k in path)
            hit = (tokens, classify_key(tokens, dictionary))
            if len(cache) < _PATH_CACHE_SIZE:
                cache[path] = hit
        tokens, match = hit
        text = value.strip()
        if match is None or not text:
            continue
        attribute, detail = match
        if attribute is SuperAttribute.NAME:
            name_raw.append((value, tokens[-1], position))
        elif attribute is SuperAttribute.DATE_OF_BIRTH:
            if detail is None:
                try:
                    dob_values.append(parse_date(value))
                except ValueError as exc:
                    warnings.warn(f"{doc.doc_id}: date of birth ignored: {exc}", ExtractionWarning, stacklevel=2)
            elif detail == "day" and not text.isdigit():
                # a "date" child may hold a full date
                try:
                    dob_values.append(parse_date(value))
                except ValueError as exc:
                    warnings.warn(f"{doc.doc_id}: date of birth ignored: {exc}", ExtractionWarning, stacklevel=2)
            else:
                group = dob_parts.setdefault(tokens[:-1], {})
                if detail in group:
                    _check_single(doc.doc_id, f"date of birth {detail}", group[detail], text, str.strip)
                else:
                    group[detail] = value
        elif attribute is SuperAttribute.GENDER:
            gender = _check_single(doc.doc_id, "gender", gender, text, str.casefold)
        elif attribute is SuperAttribute.NIC:
            nic = _check_single(doc.doc_id, "nic", nic, text, canonical_nic)
        else:
            if detail in ADDRESS_LEVELS:
                if detail in levels_seen:
                    _check_single(doc.doc_id, f"address {detail}", levels_seen[detail], text, str.casefold)
                    continue
                levels_seen[detail] = text
            address_parts.append((detail, text))

    for parent, parts in dob_parts.items():
        try:
            dob_values.append(_dob_from_parts(parts))
        except (ValueError, KeyError) as exc:
            warnings.warn(
                f"{doc.doc_id}: date of birth under {'/'.join(parent)} ignored: {exc}",
                ExtractionWarning,
                stacklevel=2,
            )
    dob = None
    for value in dob_values:
        dob = _check_single(doc.doc_id, "date of birth", dob, value)

    address: Optional[AddressValue] = None
    if any(label != "address" for label, _ in address_parts):
        # a bare container leaf next to child keys reads as another line
        address = StructuredAddress(
            tuple([("line" if label == "address" else label, text) for label, text in address_parts])
        )
    elif address_parts:
        address = SingleValueAddress(" ".join(text for _, text in address_parts))

    name = order_name_segments(name_raw, dictionary) if name_raw else None
    if name is not None and not name.segments:
        name = None

    return ExtractedProfile(
        doc_id=doc.doc_id,
        name=name,
        dob=dob,
        gender=gender,
        address=address,
        nic=nic,
    )
