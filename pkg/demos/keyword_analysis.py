"""
Which keywords make good topics?
================================

Average keyword similarity within a topic and between topics, correlated with
per-topic retrieval AUC by Kendall's tau.
"""

from labelvec import TopicSpec, TrainConfig, build_vocabulary, classify, compute_label_embeddings, train
from labelvec.evaluation import (
    intertopic_similarity,
    intratopic_similarity,
    kendall_p_value,
    kendall_tau,
    one_vs_rest,
    roc_auc,
)
from labelvec.labeling import LabelParams
from labelvec.synthetic import make_topic_corpus

corpus, base_topics = make_topic_corpus(n_topics=6, docs_per_topic=80, filler_fraction=0.8,
                                        doc_length=30, seed=4)
model = train(corpus, build_vocabulary(corpus), TrainConfig(dim=50, seed=4))

###############################################################################
# Give each topic a keyword list of a different size and quality: some lists
# borrow a word from the next topic.
topics = []
for i, topic in enumerate(base_topics):
    words = [f"{topic.name}word{j}" for j in range(2 + i)]
    if i % 2:
        words.append(f"{base_topics[(i + 1) % len(base_topics)].name}word0")
    topics.append(TopicSpec(topic.name, tuple(words)))

labels = compute_label_embeddings(model, topics, LabelParams(s=0.6, d_min=30))
per_topic = one_vs_rest(classify(model, labels), corpus.gold_labels, [t.name for t in topics])
auc = [roc_auc(*per_topic[t.name]).auc for t in topics]
intra = [intratopic_similarity(model, t) for t in topics]
inter = [intertopic_similarity(model, t, topics) for t in topics]
for t, a, x, y in zip(topics, auc, intra, inter):
    print(f"{t.name}: {len(t.keywords):2d} keywords  intra {x:.3f}  inter {y:.3f}  AUC {a:.3f}")

###############################################################################
# Kendall's tau with a two-sided normal-approximation p-value.
for name, values in (("keyword count", [len(t.keywords) for t in topics]), ("intratopic", intra),
                     ("intertopic", inter)):
    res = kendall_tau(values, auc)
    print(f"{name:>13} vs AUC: tau={res.tau:+.3f} p={res.p_value:.3f} significant={res.significant}")

###############################################################################
# The same test from a reported tau and sample size alone.
for tau in (0.19, 0.33, -0.35):
    print(f"tau={tau:+.2f}, n=24 -> p={kendall_p_value(tau, 24):.3f}")
