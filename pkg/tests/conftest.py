import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from labelvec import TrainConfig, build_vocabulary, train  # noqa: E402
from labelvec.synthetic import make_topic_corpus  # noqa: E402


@pytest.fixture(scope="session")
def small_topic_data():
    corpus, topics = make_topic_corpus(n_topics=3, docs_per_topic=60, seed=7)
    return corpus, topics


@pytest.fixture(scope="session")
def small_model(small_topic_data):
    corpus, _ = small_topic_data
    vocab = build_vocabulary(corpus)
    return train(corpus, vocab, TrainConfig(dim=32, epochs=10, seed=3))


@pytest.fixture(scope="session")
def fixture_files(tmp_path_factory):
    """A 180-document labelled JSONL corpus and a matching keywords file on disk."""
    root = tmp_path_factory.mktemp("fixture")
    corpus, topics = make_topic_corpus(n_topics=3, docs_per_topic=60, seed=11)
    corpus_path = root / "corpus.jsonl"
    with open(corpus_path, "w", encoding="utf-8") as handle:
        for doc in corpus:
            handle.write(json.dumps({"text": doc.raw_text, "label": doc.gold_label}) + "\n")
    keywords_path = root / "keywords.json"
    keywords_path.write_text(json.dumps([{"topic": t.name, "keywords": list(t.keywords)} for t in topics]))
    return corpus_path, keywords_path, topics

