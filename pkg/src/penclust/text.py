"""Corpus encoding: bag-of-words document-term matrices.

Tokenization is deliberately minimal and fully specified: case-fold, split
on runs of non-alphanumeric characters (underscore counts as a separator),
drop empties and stopwords. No stemming, no n-grams. Raw encoding counts
occurrences; binary encoding thresholds raw counts at presence.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset import Dataset
from .errors import DataError

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

ENCODINGS = ("raw", "binary")


def preprocess(text: str, stopwords: set[str] = frozenset()) -> list[str]:
    """Lowercase, split on non-alphanumeric runs, drop stopwords; order kept."""
    return [t for t in _TOKEN_RE.findall(text.lower()) if t not in stopwords]


@dataclass(eq=False)
class Corpus:
    documents: list[tuple[str, str]]
    stopwords: set[str] = field(default_factory=set)

    def __post_init__(self):
        ids = [doc_id for doc_id, _ in self.documents]
        if len(set(ids)) != len(ids):
            raise DataError("document ids must be unique")
        self.stopwords = {w.lower() for w in self.stopwords}

    @property
    def doc_ids(self) -> list[str]:
        return [doc_id for doc_id, _ in self.documents]


@dataclass(eq=False)
class Vocabulary:
    """Lexicographically sorted unique terms with a term -> column index."""

    terms: list[str]
    index: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.terms != sorted(set(self.terms)):
            raise DataError("vocabulary terms must be sorted and unique")
        self.index = {t: j for j, t in enumerate(self.terms)}

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(eq=False)
class DocTermMatrix:
    counts: np.ndarray
    encoding: str
    vocab: Vocabulary
    doc_ids: list[str]

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.encoding not in ENCODINGS:
            raise DataError(f"encoding must be one of {ENCODINGS}")
        if self.counts.shape[1] != len(self.vocab):
            raise DataError("column count must equal vocabulary size")
        if np.any(self.counts < 0):
            raise DataError("counts must be nonnegative")
        if self.encoding == "binary" and not np.isin(self.counts, (0, 1)).all():
            raise DataError("binary entries must be 0 or 1")

    def to_dataset(self) -> Dataset:
        """View the matrix as a Dataset (terms as variables) for clustering."""
        return Dataset(
            values=self.counts.astype(float),
            var_names=list(self.vocab.terms),
            row_ids=list(self.doc_ids),
        )


def build_vocabulary(corpus: Corpus) -> Vocabulary:
    """Sorted union of preprocessed tokens across all documents."""
    terms: set[str] = set()
    for _, text in corpus.documents:
        terms.update(preprocess(text, corpus.stopwords))
    if not terms:
        raise DataError("corpus produced an empty vocabulary; nothing to encode")
    return Vocabulary(terms=sorted(terms))


def encode(corpus: Corpus, vocab: Vocabulary, encoding: str = "raw") -> DocTermMatrix:
    """Count (or threshold) in-vocabulary tokens per document."""
    if encoding not in ENCODINGS:
        raise DataError(f"encoding must be one of {ENCODINGS}")
    counts = np.zeros((len(corpus.documents), len(vocab)), dtype=np.int64)
    for row, (_, text) in enumerate(corpus.documents):
        for token in preprocess(text, corpus.stopwords):
            col = vocab.index.get(token)
            if col is not None:
                counts[row, col] += 1
    if encoding == "binary":
        counts = (counts > 0).astype(np.int64)
    return DocTermMatrix(
        counts=counts, encoding=encoding, vocab=vocab, doc_ids=corpus.doc_ids
    )


def read_corpus(path: str | Path, stopwords: set[str] | None = None) -> Corpus:
    """Load a corpus from a directory of UTF-8 .txt files or a JSON-lines file.

    Directory mode uses filenames as doc ids (sorted for determinism);
    JSON-lines mode expects one {"id": ..., "text": ...} object per line.
    """
    path = Path(path)
    stopwords = stopwords or set()
    if path.is_dir():
        docs = []
        for f in sorted(path.glob("*.txt")):
            docs.append((f.name, f.read_text(encoding="utf-8")))
        if not docs:
            raise DataError(f"no .txt files found in {path}")
        return Corpus(documents=docs, stopwords=stopwords)
    if not path.exists():
        raise DataError(f"corpus path does not exist: {path}")
    docs = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            docs.append((str(obj["id"]), str(obj["text"])))
        except (json.JSONDecodeError, KeyError) as exc:
            raise DataError(f"bad JSON-lines record at line {lineno}: {exc}") from exc
    if not docs:
        raise DataError(f"no documents found in {path}")
    return Corpus(documents=docs, stopwords=stopwords)


def read_stopwords(path: str | Path) -> set[str]:
    """One token per line; blank lines ignored; lowercased."""
    out = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        token = line.strip().lower()
        if token:
            out.add(token)
    return out
