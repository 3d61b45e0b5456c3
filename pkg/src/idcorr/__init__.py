"""Correlation scores for sets of structured personal identity documents."""

from .document_model import DocumentSet, IdentityDocument, flatten, load_document, normalize_key, parse_document
from .extraction import AttributeDictionary, ExtractedProfile, SuperAttribute, classify_key, extract
from .pipeline import DocumentScore, ScoreMatrix, score_set
from .text_metrics import SimilarityMeasure, levenshtein_similarity, similarity, soundex

__all__ = [
    "AttributeDictionary",
    "DocumentScore",
    "DocumentSet",
    "ExtractedProfile",
    "IdentityDocument",
    "ScoreMatrix",
    "SimilarityMeasure",
    "SuperAttribute",
    "classify_key",
    "extract",
    "flatten",
    "levenshtein_similarity",
    "load_document",
    "normalize_key",
    "parse_document",
    "score_set",
    "similarity",
    "soundex",
]

__version__ = "0.1.0"
