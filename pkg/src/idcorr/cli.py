"""Command-line interface.

Exit status: 0 on success, 1 on an internal error, 2 on bad usage or input.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
import warnings
from pathlib import Path
from typing import Sequence

from . import __version__
from .document_model import IdentityDocument, load_document
from .errors import IdCorrError
from .extraction import DEFAULT_DICTIONARY, AttributeDictionary
from .pipeline import score_set
from .reporting import (
    METRIC_COLUMNS,
    bucket_count,
    distribution,
    metric_row,
    render_csv,
    render_distribution,
    render_json,
)

log = logging.getLogger("idcorr")

DICT_ENV = "IDCORR_DICT"


class InputError(Exception):
    """Bad input files or arguments; maps to exit status 2."""


def _load_dictionary(path: str | None) -> AttributeDictionary:
    path = path or os.environ.get(DICT_ENV)
    if not path:
        return DEFAULT_DICTIONARY
    try:
        return AttributeDictionary.load(path)
    except (OSError, IdCorrError) as exc:
        raise InputError(f"dictionary {path}: {exc}") from None


def _document_paths(inputs: Sequence[str]) -> list[Path]:
    paths = []
    for item in inputs:
        path = Path(item)
        if path.is_dir():
            paths.extend(sorted(path.glob("*.json")))
        else:
            paths.append(path)
    return paths


def _load_documents(paths: Sequence[Path]) -> list[IdentityDocument]:
    docs, problems, seen = [], [], {}
    for path in paths:
        try:
            doc = load_document(path)
        except (OSError, IdCorrError) as exc:
            problems.append(f"{path}: {exc}")
            continue
        if doc.doc_id in seen:
            problems.append(f"{path}: document id {doc.doc_id!r} already used by {seen[doc.doc_id]}")
            continue
        seen[doc.doc_id] = path
        docs.append(doc)
    if problems:
        raise InputError("\n".join(problems))
    return docs


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _score(docs, dictionary):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        matrix, scores = score_set(docs, dictionary)
    return matrix, scores, [str(w.message) for w in caught]


def cmd_score(args) -> int:
    dictionary = _load_dictionary(args.dict)
    docs = _load_documents(_document_paths(args.inputs))
    if len(docs) < 2:
        raise InputError(f"need at least 2 documents, got {len(docs)}")
    try:
        matrix, scores, notes = _score(docs, dictionary)
    except IdCorrError as exc:
        raise InputError(str(exc)) from None
    for note in notes:
        log.warning(note)
    if args.format == "csv":
        _write(render_csv(matrix, scores), args.out)
    else:
        _write(render_json(matrix, scores, notes), args.out)
    return 0


def cmd_compare_metrics(args) -> int:
    try:
        text = Path(args.pairs).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{args.pairs}: {exc}") from None
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["pair_id", "a", "b", *METRIC_COLUMNS])
    problems = 0
    rows = 0
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is not None and [h.strip() for h in header] != ["a", "b"]:
        raise InputError(f"{args.pairs}: expected header 'a,b', got {header!r}")
    for line_no, row in enumerate(reader, 2):
        if len(row) != 2:
            problems += 1
            log.warning("%s:%d: expected 2 columns, got %d; row skipped", args.pairs, line_no, len(row))
            continue
        rows += 1
        a, b = row
        scores = metric_row(a, b)
        writer.writerow([rows, a, b, *(f"{scores[m]:.4f}" for m in METRIC_COLUMNS)])
    _write(out.getvalue(), args.out)
    print(f"compared {rows} pairs, {problems} warnings", file=sys.stderr)
    return 0


def cmd_distribution(args) -> int:
    try:
        bucket_count(args.bucket)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        raise InputError(f"{corpus}: not a directory")
    dictionary = _load_dictionary(args.dict)
    matrices = []
    skipped = 0
    for person in sorted(p for p in corpus.iterdir() if p.is_dir()):
        try:
            docs = _load_documents(_document_paths([str(person)]))
            if len(docs) < 2:
                raise InputError(f"{person}: fewer than 2 documents")
            matrix, _, notes = _score(docs, dictionary)
        except (InputError, IdCorrError) as exc:
            skipped += 1
            log.warning("skipped %s: %s", person.name, exc)
            continue
        for note in notes:
            log.warning("%s: %s", person.name, note)
        matrices.append(matrix)
    _write(render_distribution(distribution(matrices, args.bucket)), args.out)
    print(f"scored {len(matrices)} document sets, skipped {skipped}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="idcorr", description="Score how consistently a set of identity documents describes one person."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log debug output")
    sub = parser.add_subparsers(dest="command", required=True)

    score = sub.add_parser("score", help="score one document set")
    score.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="PATH",
                       help="document files or directories of *.json files")
    score.add_argument("--dict", help=f"attribute dictionary JSON (default: ${DICT_ENV})")
    score.add_argument("--format", choices=("json", "csv"), default="json")
    score.add_argument("--out", help="output file (default: stdout)")
    score.set_defaults(func=cmd_score)

    metrics = sub.add_parser("compare-metrics", help="run the seven string similarity measures over word pairs")
    metrics.add_argument("--pairs", required=True, help="CSV with header a,b")
    metrics.add_argument("--out", help="output CSV (default: stdout)")
    metrics.set_defaults(func=cmd_compare_metrics)

    dist = sub.add_parser("distribution", help="histogram of attribute scores over a corpus")
    dist.add_argument("--corpus", required=True, help="directory with one subdirectory per document set")
    dist.add_argument("--bucket", type=float, default=0.1, help="bucket width (default 0.1)")
    dist.add_argument("--dict", help=f"attribute dictionary JSON (default: ${DICT_ENV})")
    dist.add_argument("--out", help="output CSV (default: stdout)")
    dist.set_defaults(func=cmd_distribution)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", force=True)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error: %s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
