"""AUC, row-wise z-scores, average ranks, and seed-aggregated summaries."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)


def _midranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks in ascending order; tied values share the average rank."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    sv = values[order]
    i = 0
    while i < len(sv):
        j = i
        while j + 1 < len(sv) and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def auc_binary(scores, labels) -> float:
    """Mann-Whitney AUC with midrank tie handling.

    Equals (#(pos, neg) pairs with score_pos > score_neg + tied pairs / 2)
    divided by n_pos * n_neg.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape:
        raise ValueError("scores and labels must have the same length")
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("undefined AUC: single-class input")
    ranks = _midranks(scores)
    return float((ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def auc_multiclass(prob_matrix, labels) -> float:
    """Macro one-vs-rest AUC: mean over classes of auc_binary(prob[:, k], y == k).

    Classes absent from `labels` are skipped with a log note. For K=2 this
    equals auc_binary on the positive-class column.
    """
    prob = np.asarray(prob_matrix, dtype=np.float64)
    labels = np.asarray(labels)
    if prob.ndim != 2 or prob.shape[1] < 2:
        raise ValueError("prob_matrix must be (n, K>=2)")
    per_class = []
    for k in range(prob.shape[1]):
        y_k = (labels == k).astype(np.int64)
        if y_k.sum() == 0:
            logger.info("auc_multiclass: class %d absent from labels, skipped", k)
            continue
        if y_k.sum() == len(labels):
            logger.info("auc_multiclass: class %d is the only labelled class, skipped", k)
            continue
        per_class.append(auc_binary(prob[:, k], y_k))
    if not per_class:
        raise ValueError("undefined AUC: no class has both positives and negatives")
    return float(np.mean(per_class))


def auc_from_margins(margins, labels, objective: str) -> float:
    """AUC of a model's raw margins.

    Binary models are ranked on the margin itself: sigmoid is strictly
    monotone, so this equals the probability AUC in exact arithmetic, but it
    cannot saturate to 0/1 ties the way float sigmoid does at huge margins.
    Softmax models go through probabilities (no per-column monotone margin
    decomposition exists).
    """
    from . import engine

    margins = np.asarray(margins, dtype=np.float64)
    if objective == engine.BINARY_LOGISTIC:
        return auc_binary(margins[:, 0], np.asarray(labels))
    return auc_multiclass(engine.predict_proba(margins, objective), labels)


def zscores(values) -> np.ndarray:
    """(v - mean) / population std; all zeros when the row is constant."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        raise ValueError("zscores needs at least 2 values")
    sigma = v.std()
    if sigma == 0.0:
        return np.zeros_like(v)
    return (v - v.mean()) / sigma


def ranks(values) -> np.ndarray:
    """Rank 1 = best (highest value); ties get the average of the spanned ranks."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        raise ValueError("ranks needs at least 2 values")
    return _midranks(-v)


@dataclass(frozen=True)
class EvalRecord:
    dataset: str
    size: object  # int or "full"
    seed: int
    method: str
    val_auc: float
    test_auc: float

    def __post_init__(self):
        for name in ("val_auc", "test_auc"):
            v = getattr(self, name)
            if not (math.isfinite(v) and 0.0 <= v <= 1.0):
                raise ValueError(f"{name} must be in [0, 1], got {v}")


@dataclass
class AggregateReport:
    """Seed means per (dataset, size, method), then ranks/z over method means,
    then per-size averages across datasets."""

    methods: list
    sizes: list
    datasets: list
    # (dataset, size, method) -> (mean test AUC over seeds, standard error, n_seeds)
    per_dataset: dict
    # (dataset, size) -> {method: rank} and {method: z}
    row_ranks: dict
    row_zscores: dict
    # (size, method) -> mean over datasets of (AUC mean, rank, z)
    summary: dict
    notes: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)


def _size_key(size) -> tuple:
    return (1, 0) if size == "full" else (0, int(size))


def aggregate(records) -> AggregateReport:
    """Aggregate per-seed records exactly as the evaluation protocol defines:
    seed means with standard error, then per-(dataset, size) ranks/z-scores
    over the method means, then per-size averages across datasets."""
    records = list(records)
    if not records:
        raise ValueError("no records to aggregate")

    by_group: dict = {}
    method_sets: dict = {}
    for rec in records:
        by_group.setdefault((rec.dataset, rec.size, rec.method), []).append(rec)
        method_sets.setdefault((rec.dataset, rec.size, rec.seed), set()).add(rec.method)

    expected = None
    for key, methods_seen in sorted(method_sets.items(), key=lambda kv: str(kv[0])):
        if expected is None:
            expected = methods_seen
        elif methods_seen != expected:
            raise ValueError(
                f"inconsistent method sets: group {key} has {sorted(methods_seen)}, "
                f"expected {sorted(expected)}"
            )
    methods = sorted(expected)

    per_dataset = {}
    for (dataset, size, method), recs in by_group.items():
        aucs = np.array([r.test_auc for r in recs], dtype=np.float64)
        stderr = float(aucs.std(ddof=1) / math.sqrt(len(aucs))) if len(aucs) > 1 else 0.0
        per_dataset[(dataset, size, method)] = (float(aucs.mean()), stderr, len(aucs))

    rows = sorted({(d, s) for (d, s, _m) in per_dataset}, key=lambda k: (k[0], _size_key(k[1])))
    row_ranks, row_zscores = {}, {}
    for dataset, size in rows:
        means = np.array([per_dataset[(dataset, size, m)][0] for m in methods])
        if len(methods) == 1:  # degenerate row: rank/z need >= 2 methods
            row_ranks[(dataset, size)] = {methods[0]: 1.0}
            row_zscores[(dataset, size)] = {methods[0]: 0.0}
        else:
            row_ranks[(dataset, size)] = dict(zip(methods, ranks(means).tolist()))
            row_zscores[(dataset, size)] = dict(zip(methods, zscores(means).tolist()))

    sizes = sorted({s for (_d, s) in rows}, key=_size_key)
    datasets = sorted({d for (d, _s) in rows})
    summary = {}
    for size in sizes:
        size_rows = [(d, s) for (d, s) in rows if s == size]
        for m in methods:
            summary[(size, m)] = {
                "mean_auc": float(np.mean([per_dataset[(d, s, m)][0] for d, s in size_rows])),
                "mean_rank": float(np.mean([row_ranks[(d, s)][m] for d, s in size_rows])),
                "mean_z": float(np.mean([row_zscores[(d, s)][m] for d, s in size_rows])),
                "n_datasets": len(size_rows),
            }

    return AggregateReport(
        methods=methods,
        sizes=sizes,
        datasets=datasets,
        per_dataset=per_dataset,
        row_ranks=row_ranks,
        row_zscores=row_zscores,
        summary=summary,
    )
