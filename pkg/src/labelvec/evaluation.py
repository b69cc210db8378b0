"""Classification metrics, ROC analysis and keyword statistics."""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import norm

from .embedding import EmbeddingModel, OOVError, cosine_similarity
from .labeling import KeywordError, TopicSpec

SIGNIFICANCE = 0.05


# --- classification ----------------------------------------------------------

def micro_prf(predictions, gold_labels) -> tuple[float, float, float]:
    """Micro-averaged precision, recall and F1 over single-label predictions.

    `gold_labels` maps doc id to gold topic (a sequence indexed by doc id
    works too). Every accepted prediction is one positive decision; every
    document contributes its gold topic as one positive to recover, so a
    rejected document counts as a false negative only. With every document
    accepted, precision, recall and F1 coincide.
    """
    tp = fp = 0
    n_gold = 0
    for p in predictions:
        try:
            gold = gold_labels[p.doc_id]
        except (KeyError, IndexError):
            gold = None
        if gold is None:
            raise ValueError(f"document {p.doc_id} has no gold label")
        n_gold += 1
        if p.accepted:
            if p.assigned_topic == gold:
                tp += 1
            else:
                fp += 1
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / n_gold if n_gold else 0.0
    if tp + fp == n_gold:
        # identical denominators: keep the three values bitwise equal
        return precision, precision, precision
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


# --- ROC ---------------------------------------------------------------------

@dataclass
class RocCurve:
    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray  # thresholds[0] is +inf, giving the (0, 0) point
    auc: float

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))


def roc_auc(scores, is_positive) -> RocCurve:
    """ROC curve from sweeping every distinct score as a ``score >= threshold`` cut.

    The area is the trapezoidal integral, which equals the probability that a
    random positive outscores a random negative with ties counted half.
    """
    scores = np.asarray(scores, dtype=np.float64)
    pos = np.asarray(is_positive, dtype=bool)
    if scores.shape != pos.shape or scores.ndim != 1:
        raise ValueError("scores and labels must be 1-D and of equal length")
    n_pos = int(pos.sum())
    n_neg = len(pos) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC needs at least one positive and one negative")
    order = np.argsort(-scores, kind="mergesort")
    s = scores[order]
    p = pos[order]
    # last index of each run of equal scores
    cut = np.flatnonzero(np.diff(s)) if len(s) > 1 else np.zeros(0, dtype=int)
    cut = np.append(cut, len(s) - 1)
    tps = np.cumsum(p)[cut]
    fps = (cut + 1) - tps
    tpr = np.concatenate(([0.0], tps / n_pos))
    fpr = np.concatenate(([0.0], fps / n_neg))
    thresholds = np.concatenate(([np.inf], s[cut]))
    auc = float(np.sum((fpr[1:] - fpr[:-1]) * (tpr[1:] + tpr[:-1]) / 2.0))
    return RocCurve(fpr, tpr, thresholds, auc)


def one_vs_rest(predictions, gold_labels, topics: Sequence[str]) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Per topic, the (scores, is_positive) arrays over every predicted document."""
    out = {}
    for topic in topics:
        scores = np.array([p.similarities[topic] for p in predictions])
        positive = np.array([gold_labels[p.doc_id] == topic for p in predictions])
        out[topic] = (scores, positive)
    return out


def micro_average_roc(per_topic: Mapping[str, tuple]) -> RocCurve:
    """Pool every topic's one-vs-rest (score, is_positive) pairs into one ROC curve."""
    if len(per_topic) < 2:
        raise ValueError("micro-averaging needs at least 2 topics")
    scores = np.concatenate([np.asarray(s, dtype=np.float64) for s, _ in per_topic.values()])
    positive = np.concatenate([np.asarray(y, dtype=bool) for _, y in per_topic.values()])
    return roc_auc(scores, positive)


def write_roc_csv(curves: Mapping[str, RocCurve], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["topic", "threshold", "fpr", "tpr"])
        for topic, curve in curves.items():
            for t, f, r in zip(curve.thresholds, curve.fpr, curve.tpr):
                writer.writerow([topic, repr(float(t)), repr(float(f)), repr(float(r))])


# --- keyword statistics ------------------------------------------------------

def _keyword_vectors(model: EmbeddingModel, topic: TopicSpec) -> list[np.ndarray]:
    vecs = []
    for word in topic.keywords:
        try:
            vecs.append(model.word_vector(word))
        except OOVError:
            pass
    return vecs


def intratopic_similarity(model: EmbeddingModel, topic: TopicSpec) -> float:
    """Mean cosine over ordered pairs of distinct in-vocabulary keywords of `topic`."""
    vecs = _keyword_vectors(model, topic)
    if len(vecs) < 2:
        raise KeywordError(f"topic {topic.name!r} needs at least 2 in-vocabulary keywords", topic.name)
    total = sum(cosine_similarity(a, b) for a, b in itertools.permutations(vecs, 2))
    return total / (len(vecs) * (len(vecs) - 1))


def intertopic_similarity(model: EmbeddingModel, topic: TopicSpec, others) -> float:
    """Mean over the other topics of the mean cross-topic keyword cosine."""
    others = [o for o in others if o.name != topic.name]
    if not others:
        raise KeywordError("intertopic similarity needs at least one other topic", topic.name)
    mine = _keyword_vectors(model, topic)
    if not mine:
        raise KeywordError(f"topic {topic.name!r} has no in-vocabulary keywords", topic.name)
    per_topic = []
    for other in others:
        theirs = _keyword_vectors(model, other)
        if not theirs:
            raise KeywordError(f"topic {other.name!r} has no in-vocabulary keywords", other.name)
        per_topic.append(sum(cosine_similarity(a, b) for a in mine for b in theirs) / (len(mine) * len(theirs)))
    return sum(per_topic) / len(per_topic)


# --- Kendall's tau -----------------------------------------------------------

@dataclass(frozen=True)
class CorrelationResult:
    tau: float
    p_value: float
    n: int

    @property
    def significant(self) -> bool:
        return self.p_value < SIGNIFICANCE


def _tie_sums(values: np.ndarray) -> tuple[float, float, float]:
    _, counts = np.unique(values, return_counts=True)
    t = counts[counts > 1].astype(np.float64)
    return float((t * (t - 1)).sum()), float((t * (t - 1) * (t - 2)).sum()), float((t * (t - 1) * (2 * t + 5)).sum())


def kendall_tau(x, y) -> CorrelationResult:
    """Kendall's tau-b with a two-sided normal-approximation p-value.

    The variance of the concordance statistic carries the usual tie
    corrections; without ties the test statistic reduces to
    ``tau / sqrt(2(2n+5) / (9n(n-1)))``.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-D and of equal length")
    n = len(x)
    if n < 3:
        raise ValueError("Kendall's tau needs at least 3 observations")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise ValueError("Kendall's tau is undefined for constant input")
    iu = np.triu_indices(n, k=1)
    s = float(np.sum(np.sign(x[iu[0]] - x[iu[1]]) * np.sign(y[iu[0]] - y[iu[1]])))
    n0 = n * (n - 1) / 2.0
    tx1, tx2, tx3 = _tie_sums(x)
    ty1, ty2, ty3 = _tie_sums(y)
    tau = s / math.sqrt((n0 - tx1 / 2.0) * (n0 - ty1 / 2.0))
    var_s = ((n * (n - 1) * (2 * n + 5) - tx3 - ty3) / 18.0
             + tx2 * ty2 / (9.0 * n * (n - 1) * (n - 2))
             + tx1 * ty1 / (2.0 * n * (n - 1)))
    z = s / math.sqrt(var_s)
    p = float(min(1.0, 2.0 * norm.sf(abs(z))))
    return CorrelationResult(float(np.clip(tau, -1.0, 1.0)), p, n)


def kendall_p_value(tau: float, n: int) -> float:
    """Two-sided normal-approximation p-value for an untied sample of size `n`."""
    if n < 3:
        raise ValueError("n must be >= 3")
    z = tau / math.sqrt(2.0 * (2 * n + 5) / (9.0 * n * (n - 1)))
    return float(min(1.0, 2.0 * norm.sf(abs(z))))
