"""Structured identity documents: parsing, the ordered key-value tree, flattening.

Entry order is kept exactly as it appears in the source, since both name
concatenation and address rendering depend on it.
"""

from __future__ import annotations

import functools
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

from .errors import DocumentParseError, KeyNormalizationError, StructureError

MAX_DEPTH = 32

_NON_ALNUM = re.compile(r"[^0-9a-z]+")


@functools.lru_cache(maxsize=4096)
def normalize_key(raw: str) -> str:
    """Lowercase ``raw`` and collapse every run of non-alphanumerics to ``_``.

    >>> normalize_key("Date of Birth")
    'date_of_birth'
    """
    token = _NON_ALNUM.sub("_", raw.lower()).strip("_")
    if not token:
        raise KeyNormalizationError(f"key {raw!r} normalizes to an empty token")
    return token


@dataclass(frozen=True)
class Leaf:
    value: str


@dataclass(frozen=True)
class ObjectNode:
    entries: tuple[tuple[str, "AttributeNode"], ...] = ()

    def keys(self) -> list[str]:
        return [key for key, _ in self.entries]

    def get(self, key: str) -> "AttributeNode | None":
        for k, child in self.entries:
            if k == key:
                return child
        return None


AttributeNode = Union[Leaf, ObjectNode]


@dataclass(frozen=True)
class IdentityDocument:
    doc_id: str
    root: ObjectNode

    def __post_init__(self):
        if not self.doc_id:
            raise StructureError("doc_id must be a non-empty string")
        if not isinstance(self.root, ObjectNode):
            raise StructureError(f"document {self.doc_id!r}: root must be an object")

    @functools.cached_property
    def leaves(self) -> tuple[tuple[tuple[str, ...], str], ...]:
        """Every ``(key_path, value)`` leaf, depth first in source order."""
        out: list[tuple[tuple[str, ...], str]] = []
        _collect(self.root, (), out)
        return tuple(out)


class DocumentSet(tuple):
    """Ordered documents with unique ids; input order is the vote tie-break order."""

    def __new__(cls, documents: Sequence[IdentityDocument] = ()):
        docs = tuple(documents)
        seen: set[str] = set()
        for doc in docs:
            if doc.doc_id in seen:
                raise StructureError(f"duplicate doc_id {doc.doc_id!r} in document set")
            seen.add(doc.doc_id)
        return super().__new__(cls, docs)

    @property
    def ids(self) -> list[str]:
        return [doc.doc_id for doc in self]


class _Pairs(list):
    """Marks a decoded JSON object so it is not confused with an array."""


def _constant(name: str) -> str:
    return name


def _leaf(value, path: tuple[str, ...]) -> Leaf:
    if isinstance(value, list):
        raise StructureError(f"arrays are not supported (at /{'/'.join(path)})")
    if value is None:
        raise StructureError(f"null values are not supported (at /{'/'.join(path)})")
    if value is True:
        return Leaf("true")
    if value is False:
        return Leaf("false")
    # numbers arrive as their source text via parse_int/parse_float
    return Leaf(value)


def _build(pairs: _Pairs, path: tuple[str, ...], depth: int) -> ObjectNode:
    if depth > MAX_DEPTH:
        raise StructureError(f"nesting deeper than {MAX_DEPTH} at {'/'.join(path)}")
    seen: dict[str, str] = {}
    entries = []
    for key, child in pairs:
        try:
            token = normalize_key(key)
        except KeyNormalizationError as exc:
            raise StructureError(f"at /{'/'.join(path)}: {exc}") from None
        if token in seen:
            raise StructureError(
                f"keys {seen[token]!r} and {key!r} collide as {token!r}"
                f" at /{'/'.join(path)}"
            )
        seen[token] = key
        if isinstance(child, _Pairs):
            node = _build(child, path + (key,), depth + 1)
        elif isinstance(child, str):
            node = Leaf(child)
        else:
            node = _leaf(child, path + (key,))
        entries.append((key, node))
    return ObjectNode(tuple(entries))


def parse_document(text: str | bytes, doc_id: str) -> IdentityDocument:
    """Parse one JSON object into an :class:`IdentityDocument`.

    Numbers and booleans become string leaves holding their source text.
    Arrays, nulls, key collisions after normalization, and nesting past
    ``MAX_DEPTH`` raise :class:`StructureError`.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentParseError("input is not valid UTF-8", exc.start) from None
    try:
        raw = json.loads(
            text,
            object_pairs_hook=_Pairs,
            parse_int=str,
            parse_float=str,
            parse_constant=_constant,
        )
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise DocumentParseError(exc.msg, offset) from None
    except RecursionError:
        raise StructureError(f"nesting deeper than {MAX_DEPTH}") from None
    if not isinstance(raw, _Pairs):
        raise StructureError(f"document {doc_id!r}: top level must be a JSON object")
    root = _build(raw, (), 1)
    return IdentityDocument(doc_id, root)


def load_document(path: str | Path, doc_id: str | None = None) -> IdentityDocument:
    """Read a document file; the file stem is the default ``doc_id``."""
    path = Path(path)
    return parse_document(path.read_bytes(), doc_id or path.stem)


def _collect(node: ObjectNode, prefix: tuple[str, ...], out: list) -> None:
    for key, child in node.entries:
        if isinstance(child, Leaf):
            out.append((prefix + (key,), child.value))
        else:
            _collect(child, prefix + (key,), out)


def flatten(doc: IdentityDocument) -> list[tuple[tuple[str, ...], str]]:
    """Depth-first, source-order list of ``(key_path, value)`` for every leaf."""
    return list(doc.leaves)
