"""Topic scoring, single-topic retrieval and multiclass classification with rejection."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .embedding import EmbeddingModel, cosine_to_rows
from .labeling import LabelEmbedding


@dataclass
class Prediction:
    doc_id: int
    similarities: dict[str, float]
    assigned_topic: str | None
    accepted: bool

    def to_json(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "topic": self.assigned_topic,
            "similarity": self.similarities.get(self.assigned_topic) if self.assigned_topic else None,
            "accepted": self.accepted,
            "scores": self.similarities,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Prediction":
        return cls(int(obj["doc_id"]), {k: float(v) for k, v in obj["scores"].items()},
                   obj.get("topic"), bool(obj["accepted"]))


@dataclass
class AlphaConfig:
    """Per-topic acceptance thresholds; topics without an entry use `default_alpha`."""

    thresholds: dict[str, float] = field(default_factory=dict)
    default_alpha: float = -1.0

    def __post_init__(self):
        for name, value in [("default", self.default_alpha), *self.thresholds.items()]:
            if not -1.0 <= value <= 1.0:
                raise ValueError(f"alpha for {name} must lie in [-1, 1], got {value}")

    def __getitem__(self, topic: str) -> float:
        return self.thresholds.get(topic, self.default_alpha)


def score_matrix(model: EmbeddingModel, labels) -> np.ndarray:
    """Cosine similarities, shape (n_docs, n_labels)."""
    if not labels:
        raise ValueError("at least one label embedding is required")
    return np.column_stack([cosine_to_rows(model.doc_vectors, label.vector) for label in labels])


def score_document(model: EmbeddingModel, labels, doc_id: int) -> dict[str, float]:
    if not labels:
        raise ValueError("at least one label embedding is required")
    vec = model.doc_vector(doc_id)
    sims = cosine_to_rows(np.stack([label.vector for label in labels]), vec)
    return {label.topic: float(s) for label, s in zip(labels, sims)}


def retrieve(model: EmbeddingModel, label: LabelEmbedding, alpha: float) -> list[tuple[int, float]]:
    """Documents whose similarity to `label` is strictly above `alpha`, best first."""
    if not -1.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [-1, 1], got {alpha}")
    sims = cosine_to_rows(model.doc_vectors, label.vector)
    hits = np.flatnonzero(sims > alpha)
    hits = hits[np.lexsort((hits, -sims[hits]))]
    return [(int(i), float(sims[i])) for i in hits]


def classify(model: EmbeddingModel, labels, alphas: AlphaConfig = AlphaConfig()) -> list[Prediction]:
    """Assign every document its most similar topic, rejecting weak assignments.

    Ties go to the topic listed first. An assignment is accepted only when its
    similarity is strictly above that topic's alpha; rejected documents keep
    their assigned topic with ``accepted=False``.
    """
    sims = score_matrix(model, labels)
    names = [label.topic for label in labels]
    best = np.argmax(sims, axis=1)
    out = []
    for doc_id, (row, b) in enumerate(zip(sims, best)):
        topic = names[b]
        out.append(Prediction(doc_id, dict(zip(names, map(float, row))), topic, bool(row[b] > alphas[topic])))
    return out


def save_predictions(predictions, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for p in predictions:
            handle.write(json.dumps(p.to_json()) + "\n")


def load_predictions(path) -> list[Prediction]:
    with open(path, encoding="utf-8") as handle:
        return [Prediction.from_json(json.loads(line)) for line in handle if line.strip()]
