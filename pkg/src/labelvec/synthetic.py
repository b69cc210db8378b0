"""Generated corpora with known topics, for tests and demonstrations."""

from __future__ import annotations

import numpy as np

from .corpus import Corpus
from .labeling import TopicSpec


def make_topic_corpus(n_topics: int = 3, docs_per_topic: int = 300, *, words_per_topic: int = 30,
                      n_filler: int = 20, filler_fraction: float = 0.10, doc_length: int = 40,
                      n_keywords: int = 3, seed: int = 0) -> tuple[Corpus, list[TopicSpec]]:
    """Corpus of `n_topics` groups with disjoint topical vocabularies plus shared filler words.

    Each token is a filler word with probability `filler_fraction` and a word
    of the document's own topic otherwise. Documents of different topics are
    interleaved. The first `n_keywords` words of each topic vocabulary become
    that topic's keywords.
    """
    rng = np.random.default_rng(seed)
    names = [f"topic{t}" for t in range(n_topics)]
    vocab = [[f"{name}word{i}" for i in range(words_per_topic)] for name in names]
    filler = [f"common{i}" for i in range(n_filler)]
    texts, labels = [], []
    for _ in range(docs_per_topic):
        for t in range(n_topics):
            is_filler = rng.random(doc_length) < filler_fraction
            topical = rng.integers(words_per_topic, size=doc_length)
            shared = rng.integers(n_filler, size=doc_length)
            words = [filler[s] if f else vocab[t][w] for f, w, s in zip(is_filler, topical, shared)]
            texts.append(" ".join(words))
            labels.append(names[t])
    topics = [TopicSpec(name, tuple(vocab[t][:n_keywords])) for t, name in enumerate(names)]
    return Corpus.from_texts(texts, labels, source_path="<synthetic>"), topics
