"""Synthetic classification tasks with controllable "transformer-like" priors,
so the fusion pipeline is verifiable at desk scale without real models."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .datasets import NUMERIC, ColumnSpec, Dataset, TableSchema
from .fusion import PriorScores

_FEATURE_STREAM = 0
_LABEL_STREAM = 1
_NOISE_STREAM = 2


@dataclass(frozen=True)
class SyntheticSpec:
    """Linear-logit generator: X ~ N(0,1), logits = X[:, :informative] @ W.

    W is drawn once from `weight_seed` and scaled by 1/sqrt(n_informative) so
    task difficulty does not drift with dimensionality. `prior_quality` (q)
    mixes the true logit into the prior; `prior_noise_scale` sets the noise
    std in units of the per-column logit std.
    """

    n_rows: int = 1000
    n_features: int = 8
    n_informative: int = 8
    n_classes: int = 2
    weight_seed: int = 0
    label_noise: float = 0.0
    prior_quality: float = 1.0
    prior_noise_scale: float = 1.0
    logit_scale: float = 1.0  # larger -> more separable labels
    prior_score_scale: float = 1.0  # output magnitude of the raw scores

    def __post_init__(self):
        if self.n_informative > self.n_features:
            raise ValueError("n_informative must be <= n_features")
        if not 2 <= self.n_classes <= 5:
            raise ValueError("n_classes must be in [2, 5]")
        if not 0.0 <= self.prior_quality <= 1.0:
            raise ValueError("prior_quality must be in [0, 1]")
        if not 0.0 <= self.label_noise < 1.0:
            raise ValueError("label_noise must be in [0, 1)")
        if self.prior_noise_scale < 0:
            raise ValueError("prior_noise_scale must be >= 0")
        if self.logit_scale <= 0:
            raise ValueError("logit_scale must be > 0")
        if self.prior_score_scale <= 0:
            raise ValueError("prior_score_scale must be > 0")


def generate(spec: SyntheticSpec, seed: int) -> tuple:
    """Dataset plus the (n, K) true logits. Pure function of (spec, seed)."""
    rng_x = np.random.default_rng(np.random.SeedSequence([int(seed), _FEATURE_STREAM]))
    rng_y = np.random.default_rng(np.random.SeedSequence([int(seed), _LABEL_STREAM]))
    rng_w = np.random.default_rng(np.random.SeedSequence([int(spec.weight_seed)]))

    X = rng_x.normal(size=(spec.n_rows, spec.n_features))
    if spec.n_informative > 0:
        W = rng_w.normal(size=(spec.n_informative, spec.n_classes))
        W *= spec.logit_scale / math.sqrt(spec.n_informative)
        logits = X[:, : spec.n_informative] @ W
    else:
        logits = np.zeros((spec.n_rows, spec.n_classes))

    z = logits - logits.max(axis=1, keepdims=True)
    probs = np.exp(z)
    probs /= probs.sum(axis=1, keepdims=True)
    cum = np.cumsum(probs, axis=1)
    u = rng_y.random((spec.n_rows, 1))
    labels = (u > cum).sum(axis=1).astype(np.int64)

    if spec.label_noise > 0:
        flip = rng_y.random(spec.n_rows) < spec.label_noise
        offsets = rng_y.integers(1, spec.n_classes, size=spec.n_rows)
        labels = np.where(flip, (labels + offsets) % spec.n_classes, labels)

    schema = TableSchema(
        columns=tuple(ColumnSpec(name=f"f{j}", kind=NUMERIC) for j in range(spec.n_features)),
        target="label",
        class_labels=tuple(f"class_{k}" for k in range(spec.n_classes)),
    )
    dataset = Dataset(
        features=X,
        labels=labels,
        row_ids=np.arange(spec.n_rows, dtype=np.int64),
        schema=schema,
    )
    return dataset, logits


def make_prior(
    true_logits: np.ndarray,
    q: float,
    noise_seed: int,
    row_ids=None,
    noise_scale: float = 1.0,
    score_scale: float = 1.0,
    model: str = "",
) -> PriorScores:
    """score = score_scale * (q * true_logit + (1-q) * gaussian noise), raw.

    Noise std per column is noise_scale * std of that column's logits, so q
    trades signal for noise on a comparable scale. score_scale sets the raw
    output magnitude only (real transformer scores carry no canonical scale);
    it never changes the prior's ranking.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must be in [0, 1]")
    logits = np.asarray(true_logits, dtype=np.float64)
    rng = np.random.default_rng(np.random.SeedSequence([int(noise_seed), _NOISE_STREAM]))
    sigma = logits.std(axis=0, keepdims=True)
    sigma = np.where(sigma > 0, sigma, 1.0)
    noise = rng.normal(size=logits.shape) * sigma * noise_scale
    scores = score_scale * (q * logits + (1.0 - q) * noise)
    if row_ids is None:
        row_ids = np.arange(len(logits), dtype=np.int64)
    return PriorScores(
        row_ids=np.asarray(row_ids, dtype=np.int64),
        scores=scores,
        source="synthetic",
        model=model or f"linear-logit-q{q}",
    )


def write_synthetic_csv(path, dataset: Dataset) -> None:
    """Emit a generated dataset in the standard CSV format (full precision)."""
    names = list(dataset.schema.feature_names) + [dataset.schema.target]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(names) + "\n")
        for i in range(dataset.n_rows):
            cells = [repr(float(v)) for v in dataset.features[i]]
            cells.append(dataset.schema.class_labels[dataset.labels[i]])
            fh.write(",".join(cells) + "\n")
