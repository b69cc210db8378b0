"""
Retrieving documents on predefined topics
=========================================

A walk through the whole pipeline on a generated corpus: train joint word and
document vectors, turn three keywords per topic into a label vector, then
retrieve and classify documents by cosine similarity to the labels.
"""

import numpy as np

from labelvec import (
    AlphaConfig,
    LabelParams,
    TrainConfig,
    build_vocabulary,
    classify,
    compute_label_embedding,
    micro_prf,
    retrieve,
    train,
)
from labelvec.synthetic import make_topic_corpus

###############################################################################
# A corpus with four topics. Each document mixes words of its own topic with
# shared filler words; the gold labels are only used for scoring at the end.
corpus, topics = make_topic_corpus(n_topics=4, docs_per_topic=150, filler_fraction=0.7,
                                   doc_length=30, seed=0)
print(len(corpus), "documents")
print(corpus[0].raw_text[:80], "...")
for topic in topics:
    print(topic.name, topic.keywords)

###############################################################################
# Train. Word and document vectors share one output layer, so a keyword vector
# can be compared with a document vector directly.
vocab = build_vocabulary(corpus, min_count=5)
model = train(corpus, vocab, TrainConfig(dim=50, epochs=10, seed=0))
print("vocabulary size", len(vocab))
print("mean loss per epoch", np.round(model.loss_history, 3))

###############################################################################
# Label vectors. The top ``d_min`` documents closest to the keyword centroid
# are always candidates, more are added while their similarity exceeds ``s``,
# LOF drops density outliers, and the rest are averaged.
#
# ``s`` has to sit above the similarity an unrelated document already has to
# the keywords. Here the filler words push that background to about 0.4, so a
# low threshold would admit nearly the whole corpus and every label would
# collapse onto the corpus mean.
params = LabelParams(s=0.7, d_min=50, d_max=0)
labels = []
for topic in topics:
    label, candidates = compute_label_embedding(model, topic, params)
    labels.append(label)
    gold = [corpus[i].gold_label for i in candidates.kept_ids]
    purity = np.mean([g == topic.name for g in gold])
    print(f"{topic.name}: {label.candidate_count} candidates, {label.kept_count} kept, purity {purity:.2f}")

###############################################################################
# Single-topic retrieval: everything above a similarity threshold alpha.
hits = retrieve(model, labels[0], alpha=0.8)
precision = np.mean([corpus[d].gold_label == labels[0].topic for d, _ in hits])
print(f"{len(hits)} documents retrieved for {labels[0].topic}, precision {precision:.3f}")

###############################################################################
# Multiclass classification. With alpha = -1 every document gets a label, so
# micro precision, recall and F1 coincide; a higher alpha leaves weakly
# matching documents unlabeled.
for alpha in (-1.0, 0.8, 0.9):
    predictions = classify(model, labels, AlphaConfig(default_alpha=alpha))
    p, r, f1 = micro_prf(predictions, corpus.gold_labels)
    unlabeled = sum(not pr.accepted for pr in predictions)
    print(f"alpha={alpha:+.1f}: P={p:.3f} R={r:.3f} F1={f1:.3f}, {unlabeled} unlabeled")
