"""Jointly embedded word and document vectors.

Document vectors are trained PV-DBOW style (a document vector predicts each of
its tokens) and word vectors Skip-gram style (a word predicts its window
neighbours). Both sweeps run over the same token sequence, document by
document, and share one negative-sampling output matrix, which is what places
words and documents in a common space where cosine similarity between a word
and a document is meaningful.
"""

from __future__ import annotations

import logging
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .corpus import Corpus, CorpusError, Vocabulary

logger = logging.getLogger(__name__)

MAGIC = b"LBL2VEC\x01"
_REAL = np.dtype("<f4")


class OOVError(LookupError):
    """A word is not in the model vocabulary."""

    def __init__(self, word: str):
        super().__init__(f"OOV({word!r})")
        self.word = word


class ModelFileError(ValueError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    dim: int = 300
    epochs: int = 10
    window: int = 5
    negatives: int = 5
    initial_lr: float = 0.025
    min_lr: float = 0.0001
    seed: int = 1
    workers: int = 1

    def __post_init__(self):
        for name in ("dim", "epochs", "window", "negatives", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not 0 < self.min_lr <= self.initial_lr:
            raise ValueError("learning rates must satisfy 0 < min_lr <= initial_lr")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


def cosine_similarity(a, b) -> float:
    """Cosine of the angle between `a` and `b`, clamped to [-1, 1].

    A zero vector has similarity 0 with everything, including itself.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def cosine_to_rows(matrix, vector) -> np.ndarray:
    """Cosine similarity between `vector` and every row of `matrix` (zero rows give 0)."""
    matrix = np.asarray(matrix, dtype=np.float64)
    vector = np.asarray(vector, dtype=np.float64)
    norms = np.linalg.norm(matrix, axis=1) * np.linalg.norm(vector)
    dots = matrix @ vector
    out = np.zeros(len(matrix))
    nz = norms > 0
    out[nz] = dots[nz] / norms[nz]
    return np.clip(out, -1.0, 1.0)


def negative_sampling_loss(input_vec, output_vectors, targets) -> float:
    """Negative-sampling loss for one input vector; `targets[0]` is the positive word."""
    v = np.asarray(input_vec, dtype=np.float64)
    u = np.asarray(output_vectors, dtype=np.float64)[np.asarray(targets)]
    scores = u @ v
    scores[1:] *= -1
    return float(np.sum(np.logaddexp(0.0, -scores)))


def negative_sampling_update(input_vec: np.ndarray, output_vectors: np.ndarray,
                             targets, lr: float) -> float:
    """Apply one SGD step of the negative-sampling objective in place.

    `targets` lists the positive word index followed by the noise word
    indices. For each target the step is ``g = lr * (label - sigmoid(u.v))``;
    ``g * u`` accumulates into the input vector and ``g * v`` is added to the
    target's output row, both using the values from before the step.

    Returns the loss before the update.
    """
    if input_vec.shape[0] != output_vectors.shape[1]:
        raise ValueError("input vector and output matrix dimensions differ")
    targets = np.ascontiguousarray(targets, dtype=np.int64)
    work = np.zeros_like(input_vec)
    return _kernels.sgns_step(input_vec, output_vectors, targets, len(targets), lr, work)


@dataclass(eq=False)
class EmbeddingModel:
    word_vectors: np.ndarray
    doc_vectors: np.ndarray
    output_vectors: np.ndarray
    vocabulary: Vocabulary
    loss_history: list[float] = field(default_factory=list)

    def __post_init__(self):
        dims = {self.word_vectors.shape[1], self.doc_vectors.shape[1], self.output_vectors.shape[1]}
        if len(dims) != 1:
            raise ValueError("word, document and output matrices must share one dimension")
        if len(self.word_vectors) != len(self.vocabulary) or len(self.output_vectors) != len(self.vocabulary):
            raise ValueError("matrix rows do not match the vocabulary size")

    @property
    def dim(self) -> int:
        return self.word_vectors.shape[1]

    @property
    def n_docs(self) -> int:
        return self.doc_vectors.shape[0]

    def word_vector(self, word: str) -> np.ndarray:
        try:
            return self.word_vectors[self.vocabulary.word_to_index[word]]
        except KeyError:
            raise OOVError(word) from None

    def doc_vector(self, doc_id: int) -> np.ndarray:
        if not 0 <= doc_id < self.n_docs:
            raise IndexError(f"doc_id {doc_id} out of range [0, {self.n_docs})")
        return self.doc_vectors[doc_id]

    def __eq__(self, other):
        if not isinstance(other, EmbeddingModel):
            return NotImplemented
        return (
            self.vocabulary.words == other.vocabulary.words
            and np.array_equal(self.vocabulary.counts, other.vocabulary.counts)
            and all(
                a.dtype == b.dtype and a.shape == b.shape and a.tobytes() == b.tobytes()
                for a, b in (
                    (self.word_vectors, other.word_vectors),
                    (self.doc_vectors, other.doc_vectors),
                    (self.output_vectors, other.output_vectors),
                )
            )
        )

    def save(self, path) -> None:
        save(self, path)

    @classmethod
    def load(cls, path) -> "EmbeddingModel":
        return load(path)


def _flatten(corpus: Corpus, vocabulary: Vocabulary) -> tuple[np.ndarray, np.ndarray]:
    encoded = [vocabulary.encode(doc.tokens) for doc in corpus]
    offsets = np.zeros(len(encoded) + 1, dtype=np.int64)
    offsets[1:] = np.cumsum([len(e) for e in encoded])
    tokens = np.concatenate(encoded) if encoded else np.zeros(0, dtype=np.int32)
    return offsets, tokens.astype(np.int64)


def train(corpus: Corpus, vocabulary: Vocabulary, config: TrainConfig = TrainConfig()) -> EmbeddingModel:
    """Train word, document and output matrices on `corpus`.

    Input matrices start uniform in ``[-0.5/dim, 0.5/dim]``, the output
    matrix starts at zero. With ``config.workers > 1`` documents are split
    into contiguous blocks trained on concurrent threads that update the
    shared matrices without locking, so results are only reproducible with a
    single worker.
    """
    if len(corpus) == 0:
        raise CorpusError("corpus is empty")
    dim = config.dim
    rng = np.random.default_rng(config.seed)
    word_vecs = ((rng.random((len(vocabulary), dim)) - 0.5) / dim).astype(np.float32)
    doc_vecs = ((rng.random((len(corpus), dim)) - 0.5) / dim).astype(np.float32)
    out_vecs = np.zeros((len(vocabulary), dim), dtype=np.float32)

    offsets, tokens = _flatten(corpus, vocabulary)
    keep_prob = vocabulary.keep_probabilities()
    cum_table = vocabulary.cumulative_table

    blocks = [b for b in np.array_split(np.arange(len(corpus), dtype=np.int64), config.workers) if len(b)]
    block_tokens = [max(int(sum(offsets[b + 1] - offsets[b])), 1) for b in blocks]
    states = [np.random.SeedSequence([config.seed, i]).generate_state(1, dtype=np.uint64) | np.uint64(1)
              for i in range(len(blocks))]
    done = [0] * len(blocks)

    def run(i):
        return _kernels.train_documents(
            blocks[i], offsets, tokens, keep_prob, cum_table,
            word_vecs, doc_vecs, out_vecs, config.window, config.negatives,
            config.initial_lr, config.min_lr, float(block_tokens[i] * config.epochs), done[i], states[i],
        )

    history = []
    pool = ThreadPoolExecutor(len(blocks)) if len(blocks) > 1 else None
    try:
        for epoch in range(config.epochs):
            results = list(pool.map(run, range(len(blocks)))) if pool else [run(0)]
            loss = sum(r[0] for r in results)
            steps = sum(r[1] for r in results)
            done = [r[2] for r in results]
            history.append(loss / max(steps, 1))
            logger.info("epoch %d/%d: mean loss %.5f over %d steps", epoch + 1, config.epochs, history[-1], steps)
    finally:
        if pool:
            pool.shutdown()

    for name, mat in (("word", word_vecs), ("document", doc_vecs), ("output", out_vecs)):
        if not np.isfinite(mat).all():
            raise FloatingPointError(f"non-finite values in {name} vectors; lower the learning rate")
    return EmbeddingModel(word_vecs, doc_vecs, out_vecs, vocabulary, history)


# --- binary model file -------------------------------------------------------

def save(model: EmbeddingModel, path) -> None:
    vocab = model.vocabulary
    parts = [MAGIC, struct.pack("<IQQ", model.dim, len(vocab), model.n_docs)]
    for word, count in zip(vocab.words, vocab.counts):
        raw = word.encode("utf-8")
        parts.append(struct.pack("<I", len(raw)))
        parts.append(raw)
        parts.append(struct.pack("<Q", int(count)))
    for mat in (model.word_vectors, model.doc_vectors, model.output_vectors):
        parts.append(np.ascontiguousarray(mat, dtype=_REAL).tobytes())
    with open(path, "wb") as handle:
        handle.write(b"".join(parts))


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise ModelFileError("unexpected end of file")
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def load(path) -> EmbeddingModel:
    with open(path, "rb") as handle:
        reader = _Reader(handle.read())
    if reader.data[:len(MAGIC)] != MAGIC:
        raise ModelFileError("unrecognized model file")
    reader.take(len(MAGIC))
    dim, n_words, n_docs = reader.unpack("<IQQ")
    words, counts = [], []
    for _ in range(n_words):
        (size,) = reader.unpack("<I")
        words.append(reader.take(size).decode("utf-8"))
        counts.append(reader.unpack("<Q")[0])

    def matrix(rows):
        return np.frombuffer(reader.take(rows * dim * 4), dtype=_REAL).reshape(rows, dim).astype(np.float32)

    word_vecs = matrix(n_words)
    doc_vecs = matrix(n_docs)
    out_vecs = matrix(n_words)
    if reader.pos != len(reader.data):
        raise ModelFileError("trailing bytes after model data")
    # min_count and the subsampling threshold are not part of the file format
    vocab = Vocabulary(words, np.array(counts, dtype=np.int64), min_count=int(min(counts)))
    return EmbeddingModel(word_vecs, doc_vecs, out_vecs, vocab)
