"""Label embeddings from topic keywords.

A topic's keywords are averaged into a keyword centroid, documents are ranked
by cosine similarity to it and admitted as candidates under the ``s`` /
``d_min`` / ``d_max`` rule, density outliers among the candidates are removed
with LOF, and the mean of the remaining document vectors becomes the label
vector.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .embedding import EmbeddingModel, OOVError, cosine_to_rows
from .lof import LofParams, filter_outliers

logger = logging.getLogger(__name__)


class KeywordError(ValueError):
    """A topic cannot be embedded, e.g. every keyword is out of vocabulary."""

    def __init__(self, message: str, topic: str | None = None, words=()):
        super().__init__(message)
        self.topic = topic
        self.words = list(words)


@dataclass(frozen=True)
class TopicSpec:
    name: str
    keywords: tuple[str, ...]

    def __post_init__(self):
        # lowercase and drop repeats, keeping first occurrence order
        words = tuple(dict.fromkeys(w.lower() for w in self.keywords))
        if not words:
            raise KeywordError(f"topic {self.name!r} has no keywords", self.name)
        object.__setattr__(self, "keywords", words)


def load_topics(path) -> list[TopicSpec]:
    """Read ``[{"topic": ..., "keywords": [...]}, ...]`` from a JSON file."""
    with open(path, encoding="utf-8") as handle:
        raw = json.load(handle)
    if not isinstance(raw, list):
        raise KeywordError("keywords file must hold a JSON list")
    topics = []
    for i, entry in enumerate(raw):
        try:
            topics.append(TopicSpec(str(entry["topic"]), tuple(entry["keywords"])))
        except (KeyError, TypeError):
            raise KeywordError(f"entry {i} needs 'topic' and 'keywords' fields") from None
    names = [t.name for t in topics]
    if len(set(names)) != len(names):
        raise KeywordError("topic names must be unique")
    return topics


@dataclass(frozen=True)
class LabelParams:
    s: float = 0.43
    d_min: int = 100
    d_max: int = 0  # 0 means every document
    lof: LofParams = field(default_factory=LofParams)

    def __post_init__(self):
        if not -1.0 <= self.s <= 1.0:
            raise ValueError(f"s must lie in [-1, 1], got {self.s}")
        if self.d_min < 1:
            raise ValueError("d_min must be >= 1")
        if self.d_max != 0 and self.d_max < self.d_min:
            raise ValueError("d_max must be 0 or >= d_min")

    def bounds(self, n_docs: int) -> tuple[int, int]:
        d_max = n_docs if self.d_max == 0 else self.d_max
        if not self.d_min <= d_max <= n_docs:
            raise ValueError(f"need d_min <= d_max <= {n_docs}, got d_min={self.d_min}, d_max={d_max}")
        return self.d_min, d_max


@dataclass
class CandidateSet:
    topic: str
    ranked_candidate_ids: list[int]
    similarities: list[float]
    kept_ids: list[int] = field(default_factory=list)


@dataclass
class LabelEmbedding:
    topic: str
    vector: np.ndarray
    candidate_count: int
    kept_count: int
    oov_keywords: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "topic": self.topic,
            "vector": [float(x) for x in self.vector],
            "candidate_count": self.candidate_count,
            "kept_count": self.kept_count,
            "oov_keywords": list(self.oov_keywords),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LabelEmbedding":
        return cls(obj["topic"], np.asarray(obj["vector"], dtype=np.float64),
                   int(obj["candidate_count"]), int(obj["kept_count"]), list(obj.get("oov_keywords", [])))


def save_labels(labels, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump([label.to_json() for label in labels], handle, indent=1)
        handle.write("\n")


def load_labels(path) -> list[LabelEmbedding]:
    with open(path, encoding="utf-8") as handle:
        return [LabelEmbedding.from_json(obj) for obj in json.load(handle)]


def centroid(vectors) -> np.ndarray:
    """Component-wise arithmetic mean of a non-empty collection of equal-length vectors."""
    arr = np.asarray(vectors, dtype=np.float64)
    if arr.ndim != 2 or len(arr) == 0:
        raise ValueError("centroid needs a non-empty list of vectors")
    return arr.mean(axis=0)


def keyword_centroid(model: EmbeddingModel, topic: TopicSpec) -> tuple[np.ndarray, list[str]]:
    vecs, oov = [], []
    for word in topic.keywords:
        try:
            vecs.append(model.word_vector(word))
        except OOVError:
            oov.append(word)
    if not vecs:
        raise KeywordError(f"all keywords of topic {topic.name!r} are out of vocabulary: {', '.join(oov)}",
                           topic.name, oov)
    if oov:
        logger.warning("topic %r: skipping out-of-vocabulary keywords %s", topic.name, oov)
    return centroid(vecs), oov


def select_candidates(model: EmbeddingModel, keyword_vec, params: LabelParams, topic: str = "") -> CandidateSet:
    """Rank documents by cosine to `keyword_vec` and admit the leading ones.

    The top ``d_min`` documents are always admitted; after that documents are
    admitted while their similarity is strictly above ``s``, up to ``d_max``.
    Equal similarities are ordered by doc id.
    """
    d_min, d_max = params.bounds(model.n_docs)
    sims = cosine_to_rows(model.doc_vectors, keyword_vec)
    order = np.lexsort((np.arange(len(sims)), -sims))
    ranked = sims[order]
    above = int(np.count_nonzero(ranked[d_min:d_max] > params.s))
    # ranked is non-increasing, so the entries above s form a prefix
    count = d_min + above
    return CandidateSet(topic, order[:count].tolist(), ranked[:count].tolist())


def compute_label_embedding(model: EmbeddingModel, topic: TopicSpec,
                            params: LabelParams = LabelParams()) -> tuple[LabelEmbedding, CandidateSet]:
    keyword_vec, oov = keyword_centroid(model, topic)
    candidates = select_candidates(model, keyword_vec, params, topic.name)
    ids = np.asarray(candidates.ranked_candidate_ids)
    doc_vecs = model.doc_vectors[ids].astype(np.float64)
    if len(ids) >= 2:
        kept = ids[filter_outliers(doc_vecs, params.lof)]
    else:
        kept = ids
    candidates.kept_ids = kept.tolist()
    vector = centroid(model.doc_vectors[kept])
    label = LabelEmbedding(topic.name, vector, len(ids), len(kept), oov)
    logger.info("topic %r: %d candidates, %d kept", topic.name, len(ids), len(kept))
    return label, candidates


def compute_label_embeddings(model: EmbeddingModel, topics, params: LabelParams = LabelParams()) -> list[LabelEmbedding]:
    return [compute_label_embedding(model, topic, params)[0] for topic in topics]
