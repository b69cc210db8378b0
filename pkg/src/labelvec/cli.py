"""Command-line pipeline: train, labels, retrieve, classify, evaluate, analyze-keywords.

Exit codes: 0 success, 2 usage or validation error, 3 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import embedding, evaluation, labeling, retrieval
from .corpus import CorpusError, build_vocabulary, ingest_jsonl
from .lof import LofParams

EXIT_USAGE = 2
EXIT_DATA = 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _ranged(lo, hi, kind=float):
    def parse(text):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid {kind.__name__} value: {text!r}") from None
        if (lo is not None and value < lo) or (hi is not None and value > hi):
            raise argparse.ArgumentTypeError(f"{value} outside range [{lo}, {hi}]")
        return value
    return parse


def _existing(path: str) -> str:
    if not os.path.exists(path):
        raise CliError(f"file not found: {path}", EXIT_USAGE)
    return path


def _write_json(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(obj, handle, indent=1, sort_keys=False)
        handle.write("\n")


def cmd_train(args) -> None:
    corpus = ingest_jsonl(_existing(args.corpus))
    vocab = build_vocabulary(corpus, args.min_count, args.sample)
    config = embedding.TrainConfig(dim=args.dim, epochs=args.epochs, window=args.window,
                                   negatives=args.negatives, initial_lr=args.lr, min_lr=args.min_lr,
                                   seed=args.seed, workers=args.workers)
    model = embedding.train(corpus, vocab, config)
    model.save(args.out)
    n_tokens = sum(len(doc.tokens) for doc in corpus)
    print(f"documents: {len(corpus)}")
    print(f"tokens: {n_tokens}")
    print(f"vocabulary: {len(vocab)}")
    print(f"final loss: {model.loss_history[-1]:.6f}")


def cmd_labels(args) -> None:
    model = embedding.load(_existing(args.model))
    topics = labeling.load_topics(_existing(args.keywords))
    params = labeling.LabelParams(s=args.s, d_min=args.dmin, d_max=args.dmax,
                                  lof=LofParams(k=args.lof_k, score_threshold=args.lof_threshold))
    try:
        params.bounds(model.n_docs)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    labels = []
    for topic in topics:
        label, _ = labeling.compute_label_embedding(model, topic, params)
        labels.append(label)
        oov = f", oov: {' '.join(label.oov_keywords)}" if label.oov_keywords else ""
        print(f"{label.topic}: {label.candidate_count} candidates, {label.kept_count} kept{oov}")
    labeling.save_labels(labels, args.out)


def cmd_retrieve(args) -> None:
    model = embedding.load(_existing(args.model))
    labels = labeling.load_labels(_existing(args.labels))
    if args.topic:
        known = {label.topic for label in labels}
        missing = [t for t in args.topic if t not in known]
        if missing:
            raise CliError(f"unknown topic(s): {', '.join(missing)}", EXIT_DATA)
        labels = [label for label in labels if label.topic in args.topic]
    with open(args.out, "w", encoding="utf-8") as handle:
        for label in labels:
            hits = retrieval.retrieve(model, label, args.alpha)
            for doc_id, sim in hits:
                handle.write(json.dumps({"topic": label.topic, "doc_id": doc_id, "similarity": sim}) + "\n")
            print(f"{label.topic}: {len(hits)} documents")


def _alphas(args) -> retrieval.AlphaConfig:
    overrides = {}
    if args.alpha_file:
        with open(_existing(args.alpha_file), encoding="utf-8") as handle:
            overrides = {str(k): float(v) for k, v in json.load(handle).items()}
    try:
        return retrieval.AlphaConfig(overrides, args.alpha)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None


def cmd_classify(args) -> None:
    model = embedding.load(_existing(args.model))
    labels = labeling.load_labels(_existing(args.labels))
    predictions = retrieval.classify(model, labels, _alphas(args))
    retrieval.save_predictions(predictions, args.out)
    accepted = sum(p.accepted for p in predictions)
    print(f"classified {len(predictions)} documents, {accepted} accepted, {len(predictions) - accepted} unlabeled")


def cmd_evaluate(args) -> None:
    corpus = ingest_jsonl(_existing(args.corpus))
    predictions = retrieval.load_predictions(_existing(args.predictions))
    gold = corpus.gold_labels
    if not predictions:
        raise CliError("predictions file is empty", EXIT_DATA)
    for p in predictions:
        if not 0 <= p.doc_id < len(gold) or gold[p.doc_id] is None:
            raise CliError(f"document {p.doc_id} has no gold label", EXIT_DATA)
    precision, recall, f1 = evaluation.micro_prf(predictions, gold)
    topics = list(predictions[0].similarities)
    per_topic = evaluation.one_vs_rest(predictions, gold, topics)
    curves = {}
    for topic, (scores, positive) in per_topic.items():
        if positive.all() or not positive.any():
            raise CliError(f"topic {topic!r} needs both positive and negative documents for ROC", EXIT_DATA)
        curves[topic] = evaluation.roc_auc(scores, positive)
    summary = {
        "n_docs": len(predictions),
        "precision": precision,
        "recall": recall,
        "f1": f1,
        "auc": {topic: curve.auc for topic, curve in curves.items()},
        "mean_auc": float(np.mean([c.auc for c in curves.values()])),
    }
    if len(per_topic) >= 2:
        curves["micro"] = evaluation.micro_average_roc(per_topic)
        summary["micro_auc"] = curves["micro"].auc
    if args.roc_csv:
        evaluation.write_roc_csv(curves, args.roc_csv)
    _write_json(summary, args.out)
    print(f"precision {precision:.4f}  recall {recall:.4f}  f1 {f1:.4f}")
    for topic, curve in curves.items():
        print(f"AUC {topic}: {curve.auc:.4f}")


def _read_auc(path) -> dict[str, float]:
    with open(_existing(path), encoding="utf-8") as handle:
        data = json.load(handle)
    if isinstance(data, dict) and isinstance(data.get("auc"), dict):
        data = data["auc"]
    return {str(k): float(v) for k, v in data.items()}


def cmd_analyze_keywords(args) -> None:
    model = embedding.load(_existing(args.model))
    topics = labeling.load_topics(_existing(args.keywords))
    auc = _read_auc(args.auc)
    missing = [t.name for t in topics if t.name not in auc]
    if missing:
        raise CliError(f"no AUC value for topic(s): {', '.join(missing)}", EXIT_DATA)
    rows = {}
    for topic in topics:
        rows[topic.name] = {
            "n_keywords": len(topic.keywords),
            "intratopic": evaluation.intratopic_similarity(model, topic),
            "intertopic": evaluation.intertopic_similarity(model, topic, topics),
            "auc": auc[topic.name],
        }
    y = [row["auc"] for row in rows.values()]
    correlations = {}
    for key in ("n_keywords", "intratopic", "intertopic"):
        try:
            res = evaluation.kendall_tau([row[key] for row in rows.values()], y)
        except ValueError as exc:
            raise CliError(f"cannot correlate {key} with AUC: {exc}", EXIT_DATA) from None
        correlations[key] = {"tau": res.tau, "p_value": res.p_value, "n": res.n, "significant": res.significant}
        print(f"{key} vs AUC: tau={res.tau:.4f} p={res.p_value:.4f}")
    _write_json({"topics": rows, "correlations": correlations}, args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="labelvec", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train word and document vectors on a JSONL corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dim", type=_ranged(1, None, int), default=300)
    p.add_argument("--epochs", type=_ranged(1, None, int), default=10)
    p.add_argument("--window", type=_ranged(1, None, int), default=5)
    p.add_argument("--negatives", type=_ranged(1, None, int), default=5)
    p.add_argument("--lr", type=_ranged(0, None), default=0.025)
    p.add_argument("--min-lr", type=_ranged(0, None), default=0.0001)
    p.add_argument("--min-count", type=_ranged(1, None, int), default=5)
    p.add_argument("--sample", type=_ranged(0, None), default=1e-3, help="subsampling threshold, 0 disables")
    p.add_argument("--seed", type=_ranged(0, 2**64 - 1, int), default=1)
    p.add_argument("--workers", type=_ranged(1, None, int), default=1)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("labels", help="compute label embeddings from topic keywords")
    p.add_argument("--model", required=True)
    p.add_argument("--keywords", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--s", type=_ranged(-1.0, 1.0), default=0.43)
    p.add_argument("--dmin", type=_ranged(1, None, int), default=100)
    p.add_argument("--dmax", type=_ranged(0, None, int), default=0, help="0 means all documents")
    p.add_argument("--lof-k", type=_ranged(1, None, int), default=20)
    p.add_argument("--lof-threshold", type=_ranged(0, None), default=1.5)
    p.set_defaults(func=cmd_labels)

    p = sub.add_parser("retrieve", help="list documents above a similarity threshold per topic")
    p.add_argument("--model", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--alpha", type=_ranged(-1.0, 1.0), required=True)
    p.add_argument("--topic", action="append", help="restrict to this topic (repeatable)")
    p.set_defaults(func=cmd_retrieve)

    p = sub.add_parser("classify", help="assign each document its most similar topic")
    p.add_argument("--model", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--alpha", type=_ranged(-1.0, 1.0), default=-1.0, help="default rejection threshold")
    p.add_argument("--alpha-file", help="JSON object of per-topic thresholds")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", help="micro P/R/F1 and ROC/AUC against gold labels")
    p.add_argument("--corpus", required=True, help="JSONL corpus carrying gold labels")
    p.add_argument("--predictions", required=True)
    p.add_argument("--out", required=True, help="summary JSON")
    p.add_argument("--roc-csv")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("analyze-keywords", help="keyword similarity statistics and their correlation with AUC")
    p.add_argument("--model", required=True)
    p.add_argument("--keywords", required=True)
    p.add_argument("--auc", required=True, help="evaluate summary JSON or a {topic: auc} object")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_analyze_keywords)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (CorpusError, labeling.KeywordError, embedding.ModelFileError, embedding.OOVError,
            json.JSONDecodeError, KeyError, UnicodeDecodeError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
