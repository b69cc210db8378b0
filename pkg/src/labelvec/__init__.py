"""Keyword-seeded topic retrieval and classification with jointly trained word/document vectors."""

from .corpus import Corpus, Document, Vocabulary, build_vocabulary, ingest_jsonl, tokenize
from .embedding import EmbeddingModel, OOVError, TrainConfig, cosine_similarity, train
from .evaluation import (
    CorrelationResult,
    RocCurve,
    intertopic_similarity,
    intratopic_similarity,
    kendall_tau,
    micro_average_roc,
    micro_prf,
    roc_auc,
)
from .labeling import LabelEmbedding, LabelParams, TopicSpec, compute_label_embedding, compute_label_embeddings
from .lof import LofParams, filter_outliers, lof_scores
from .retrieval import AlphaConfig, Prediction, classify, retrieve, score_document

__version__ = "0.1.0"

__all__ = [
    "AlphaConfig", "Corpus", "CorrelationResult", "Document", "EmbeddingModel", "LabelEmbedding",
    "LabelParams", "LofParams", "OOVError", "Prediction", "RocCurve", "TopicSpec", "TrainConfig",
    "Vocabulary", "build_vocabulary", "classify", "compute_label_embedding", "compute_label_embeddings",
    "cosine_similarity", "filter_outliers", "ingest_jsonl", "intertopic_similarity",
    "intratopic_similarity", "kendall_tau", "lof_scores", "micro_average_roc", "micro_prf", "retrieve",
    "roc_auc", "score_document", "tokenize", "train",
]
