"""Report rendering (JSON/CSV) and score-distribution histograms."""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .extraction import SuperAttribute
from .pipeline import ATTRIBUTES, DocumentScore, ScoreMatrix
from .text_metrics import SimilarityMeasure, similarity

DECIMALS = 4


def _rounded(value):
    if isinstance(value, float):
        return round(value, DECIMALS)
    if isinstance(value, dict):
        return {str(k): _rounded(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_rounded(v) for v in value]
    return value


def _fmt(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.{DECIMALS}f}"


def report_dict(matrix: ScoreMatrix, scores: Sequence[DocumentScore], warnings: Iterable[str] = ()) -> dict:
    documents = []
    for ds in scores:
        attributes = {}
        for attribute in ATTRIBUTES:
            cell = matrix.get(ds.doc_id, attribute)
            if cell is None:
                reason = matrix.absent_reasons.get((ds.doc_id, attribute), "not carried")
                attributes[attribute.value] = {"score": None, "details": {"reason": reason}}
            else:
                attributes[attribute.value] = {"score": cell.score, "details": cell.details}
        documents.append({"id": ds.doc_id, "score": ds.score, "attributes": attributes})
    defined = [ds.score for ds in scores if ds.score is not None]
    summary = {
        "documents": len(scores),
        "scored_documents": len(defined),
        "mean_score": statistics.fmean(defined) if defined else None,
        "min_score": min(defined) if defined else None,
        "carriers": {
            a.value: sum(matrix.get(d, a) is not None for d in matrix.doc_ids) for a in ATTRIBUTES
        },
        "warnings": list(warnings),
    }
    return _rounded({"documents": documents, "set_summary": summary})


def render_json(matrix: ScoreMatrix, scores: Sequence[DocumentScore], warnings: Iterable[str] = ()) -> str:
    return json.dumps(report_dict(matrix, scores, warnings), indent=2, ensure_ascii=False) + "\n"


def render_csv(matrix: ScoreMatrix, scores: Sequence[DocumentScore]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["document", "score", *(a.value for a in ATTRIBUTES)])
    for ds in scores:
        writer.writerow([ds.doc_id, _fmt(ds.score), *(_fmt(matrix.score(ds.doc_id, a)) for a in ATTRIBUTES)])
    return out.getvalue()


METRIC_COLUMNS = [m.value for m in SimilarityMeasure]


def metric_row(a: str, b: str) -> dict[str, float]:
    return {m.value: similarity(m, a, b) for m in SimilarityMeasure}


def bucket_count(width: float) -> int:
    """Number of buckets of ``width`` covering [0, 1]; ``width`` must divide 1 evenly."""
    if not 0 < width <= 1:
        raise ValueError(f"bucket width must be in (0, 1], got {width}")
    count = round(1 / width)
    if not math.isclose(count * width, 1.0, abs_tol=1e-9):
        raise ValueError(f"bucket width {width} does not divide 1.0 evenly")
    return count


@dataclass
class Distribution:
    width: float
    counts: dict[SuperAttribute, list[int]]
    samples: dict[SuperAttribute, list[float]]

    def variance(self, attribute: SuperAttribute) -> Optional[float]:
        values = self.samples[attribute]
        return statistics.pvariance(values) if values else None

    def bucket_labels(self) -> list[str]:
        n = len(next(iter(self.counts.values())))
        labels = []
        for i in range(n):
            lo, hi = i * self.width, (i + 1) * self.width
            closing = "]" if i == n - 1 else ")"
            labels.append(f"[{lo:.2f},{hi:.2f}{closing}")
        return labels


def distribution(matrices: Iterable[ScoreMatrix], width: float = 0.1) -> Distribution:
    """Bucketed frequency of per-document attribute scores across many sets."""
    n = bucket_count(width)
    counts = {a: [0] * n for a in ATTRIBUTES}
    samples: dict[SuperAttribute, list[float]] = {a: [] for a in ATTRIBUTES}
    for matrix in matrices:
        for attribute in ATTRIBUTES:
            for value in matrix.column(attribute):
                if value is None:
                    continue
                index = min(int(math.floor(value / width + 1e-9)), n - 1)
                counts[attribute][index] += 1
                samples[attribute].append(value)
    return Distribution(width, counts, samples)


def render_distribution(dist: Distribution) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["bucket", *(a.value for a in ATTRIBUTES)])
    for i, label in enumerate(dist.bucket_labels()):
        writer.writerow([label, *(dist.counts[a][i] for a in ATTRIBUTES)])
    writer.writerow(["count", *(len(dist.samples[a]) for a in ATTRIBUTES)])
    writer.writerow(
        ["variance", *("" if dist.variance(a) is None else f"{dist.variance(a):.6f}" for a in ATTRIBUTES)]
    )
    return out.getvalue()
