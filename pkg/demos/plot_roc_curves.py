"""
ROC curves per topic and micro-averaged
=======================================

Sweeping the acceptance threshold alpha for one topic traces its ROC curve.
Pooling the one-vs-rest pairs of every topic gives the micro-averaged curve.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from labelvec import LabelParams, TrainConfig, build_vocabulary, classify, compute_label_embeddings, train
from labelvec.evaluation import micro_average_roc, one_vs_rest, roc_auc
from labelvec.synthetic import make_topic_corpus

# Heavy filler makes some topics hard to separate, which is what spreads the
# curves apart.
corpus, topics = make_topic_corpus(n_topics=6, docs_per_topic=80, filler_fraction=0.8,
                                   doc_length=30, seed=4)
model = train(corpus, build_vocabulary(corpus), TrainConfig(dim=50, seed=4))
labels = compute_label_embeddings(model, topics, LabelParams(s=0.6, d_min=30))
predictions = classify(model, labels)

###############################################################################
# One curve per topic, scored one-vs-rest against the gold labels.
per_topic = one_vs_rest(predictions, corpus.gold_labels, [t.name for t in topics])
fig, ax = plt.subplots(figsize=(5, 5))
for name, (scores, positive) in per_topic.items():
    curve = roc_auc(scores, positive)
    ax.plot(curve.fpr, curve.tpr, label=f"{name} (AUC {curve.auc:.3f})")
    print(name, round(curve.auc, 4))

micro = micro_average_roc(per_topic)
ax.plot(micro.fpr, micro.tpr, "k--", label=f"micro-average (AUC {micro.auc:.3f})")
ax.plot([0, 1], [0, 1], color="0.8", lw=0.8)
ax.set_xlabel("false positive rate")
ax.set_ylabel("true positive rate")
ax.legend(loc="lower right", fontsize=8)
fig.tight_layout()
fig.savefig("roc_curves.png", dpi=120)
print("micro-average AUC", round(micro.auc, 4))

###############################################################################
# The area equals the chance that a random positive outscores a random
# negative, so any strictly increasing transform of the scores keeps it.
scores, positive = per_topic[topics[3].name]
print(roc_auc(scores, positive).auc, roc_auc(scores ** 3, positive).auc)
