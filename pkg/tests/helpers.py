import numpy as np

from labelvec import EmbeddingModel
from labelvec.corpus import Vocabulary


def make_model(doc_vectors, word_vectors=None, words=None):
    """Hand-built model with the given document (and optionally word) vectors."""
    doc_vectors = np.asarray(doc_vectors, dtype=np.float64)
    if word_vectors is None:
        word_vectors = np.zeros((1, doc_vectors.shape[1]))
        words = ["unused"]
    word_vectors = np.asarray(word_vectors, dtype=np.float64)
    vocab = Vocabulary(list(words), np.full(len(words), 10))
    return EmbeddingModel(word_vectors, doc_vectors, np.zeros_like(word_vectors), vocab)
