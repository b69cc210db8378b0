"""Document ingestion, tokenization and vocabulary construction."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_MIN_COUNT = 5
DEFAULT_SUBSAMPLE = 1e-3
NEGATIVE_POWER = 0.75


class CorpusError(ValueError):
    """Raised for malformed corpus input or an unusable vocabulary."""


def _strip_edges(token: str) -> str:
    start, end = 0, len(token)
    while start < end and not token[start].isalnum():
        start += 1
    while end > start and not token[end - 1].isalnum():
        end -= 1
    return token[start:end]


def tokenize(raw_text: str) -> list[str]:
    """Lowercase `raw_text`, split on whitespace and trim punctuation at token edges.

    Inner punctuation is kept (``"nasa's"``), numbers are kept, and tokens
    that end up empty are dropped.

    >>> tokenize("Hello, World!")
    ['hello', 'world']
    """
    tokens = []
    for piece in raw_text.lower().split():
        piece = _strip_edges(piece)
        if piece:
            tokens.append(piece)
    return tokens


@dataclass(frozen=True)
class Document:
    doc_id: int
    raw_text: str
    tokens: tuple[str, ...]
    gold_label: str | None = None


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    source_path: str = ""

    def __len__(self) -> int:
        return len(self.documents)

    def __getitem__(self, doc_id: int) -> Document:
        return self.documents[doc_id]

    def __iter__(self):
        return iter(self.documents)

    @property
    def gold_labels(self) -> list[str | None]:
        return [doc.gold_label for doc in self.documents]

    @classmethod
    def from_texts(cls, texts: Iterable[str], labels: Sequence[str | None] | None = None,
                   source_path: str = "") -> "Corpus":
        """Build a corpus from in-memory strings; doc ids follow iteration order."""
        texts = list(texts)
        if labels is not None and len(labels) != len(texts):
            raise CorpusError("texts and labels differ in length")
        docs = tuple(
            Document(i, text, tuple(tokenize(text)), None if labels is None else labels[i])
            for i, text in enumerate(texts)
        )
        if not docs:
            raise CorpusError("corpus is empty")
        return cls(docs, source_path)


def ingest_jsonl(path: str) -> Corpus:
    """Read a JSONL corpus with a required ``text`` field and optional ``label`` field.

    Blank lines are not allowed; line numbers in errors are 1-based.
    """
    texts: list[str] = []
    labels: list[str | None] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"malformed JSON at line {lineno}: {exc.msg}") from None
            if not isinstance(record, dict):
                raise CorpusError(f"expected a JSON object at line {lineno}")
            if "text" not in record:
                raise CorpusError(f"missing field text at line {lineno}")
            text = record["text"]
            if not isinstance(text, str):
                raise CorpusError(f"field text is not a string at line {lineno}")
            label = record.get("label")
            if label is not None and not isinstance(label, str):
                raise CorpusError(f"field label is not a string at line {lineno}")
            texts.append(text)
            labels.append(label)
    if not texts:
        raise CorpusError(f"no documents in {path}")
    return Corpus.from_texts(texts, labels, source_path=str(path))


@dataclass
class Vocabulary:
    """Retained words with their counts and the negative-sampling distribution.

    Words are indexed by descending count, ties broken alphabetically, so the
    index assignment depends only on the counts.
    """

    words: list[str]
    counts: np.ndarray
    min_count: int = DEFAULT_MIN_COUNT
    subsample_threshold: float = DEFAULT_SUBSAMPLE
    word_to_index: dict[str, int] = field(init=False, repr=False)
    negative_table: np.ndarray = field(init=False, repr=False)
    cumulative_table: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if len(self.words) != len(self.counts):
            raise CorpusError("words and counts differ in length")
        if not self.words:
            raise CorpusError("empty vocabulary")
        self.word_to_index = {w: i for i, w in enumerate(self.words)}
        weights = self.counts.astype(np.float64) ** NEGATIVE_POWER
        self.negative_table = weights / weights.sum()
        self.cumulative_table = np.cumsum(self.negative_table)
        self.cumulative_table[-1] = 1.0

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.word_to_index

    @property
    def total_tokens(self) -> int:
        return int(self.counts.sum())

    def keep_probabilities(self) -> np.ndarray:
        """Per-word probability of keeping an occurrence under frequent-word subsampling.

        Uses the word2vec rule ``(sqrt(f / (t*N)) + 1) * (t*N) / f`` clipped to 1;
        a threshold of 0 disables subsampling.
        """
        if self.subsample_threshold <= 0:
            return np.ones(len(self.words))
        budget = self.subsample_threshold * self.total_tokens
        counts = self.counts.astype(np.float64)
        keep = (np.sqrt(counts / budget) + 1.0) * budget / counts
        return np.minimum(keep, 1.0)

    def encode(self, tokens: Iterable[str]) -> np.ndarray:
        """Map tokens to indices, silently dropping words outside the vocabulary."""
        lookup = self.word_to_index
        return np.fromiter((lookup[t] for t in tokens if t in lookup), dtype=np.int32)


def build_vocabulary(corpus: Corpus, min_count: int = DEFAULT_MIN_COUNT,
                     subsample_threshold: float = DEFAULT_SUBSAMPLE) -> Vocabulary:
    if min_count < 1:
        raise CorpusError("min_count must be >= 1")
    if subsample_threshold < 0:
        raise CorpusError("subsample_threshold must be >= 0")
    freq: dict[str, int] = {}
    for doc in corpus:
        for token in doc.tokens:
            freq[token] = freq.get(token, 0) + 1
    kept = sorted(((w, c) for w, c in freq.items() if c >= min_count), key=lambda wc: (-wc[1], wc[0]))
    if not kept:
        raise CorpusError("empty vocabulary")
    words = [w for w, _ in kept]
    counts = np.array([c for _, c in kept], dtype=np.int64)
    return Vocabulary(words, counts, min_count, subsample_threshold)
