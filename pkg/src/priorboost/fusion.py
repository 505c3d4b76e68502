"""Prior-score fusion: center transformer scores, scale them by s, install
them as base margins, and train/apply the residual GBDT.

Scores live on disk raw (uncentered); centering happens exactly once, here.
The prior is mandatory at inference: rows without scores fail loudly.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace

import numpy as np

from . import engine
from .datasets import Dataset, SplitSpec

SOURCES = ("llm", "tabpfn", "synthetic")
CENTER_ROW = "row"
CENTER_COLUMN = "column"

SCALE_MIN = 1e-4
SCALE_MAX = 1e4

_ROW_SUM_TOL = 1e-9


class UncoveredRowsError(KeyError):
    """Requested rows have no prior scores."""


def validate_scale(s: float) -> float:
    s = float(s)
    if s == 0.0:
        return s
    if not SCALE_MIN <= s <= SCALE_MAX:
        raise ValueError(f"scale must be 0 or in [{SCALE_MIN}, {SCALE_MAX}], got {s}")
    return s


def _content_hash(row_ids: np.ndarray, scores: np.ndarray) -> str:
    h = hashlib.sha256()
    h.update(np.asarray(row_ids, dtype=np.int64).tobytes())
    h.update(np.asarray(scores, dtype=np.float64).tobytes())
    return h.hexdigest()


@dataclass(frozen=True)
class PriorScores:
    """Per-row, per-class raw transformer scores aligned to row identities."""

    row_ids: np.ndarray  # (n,)
    scores: np.ndarray  # (n, K), class order matches the schema
    source: str
    centered: bool = False
    center_axis: str = CENTER_ROW
    model: str = ""
    content_hash: str = ""  # hash of the *raw* content; survives centering

    def __post_init__(self):
        self.row_ids.setflags(write=False)
        self.scores.setflags(write=False)
        if self.source not in SOURCES:
            raise ValueError(f"source must be one of {SOURCES}, got {self.source!r}")
        if self.scores.ndim != 2 or len(self.row_ids) != len(self.scores):
            raise ValueError("scores must be (n, K) aligned with row_ids")
        if len(np.unique(self.row_ids)) != len(self.row_ids):
            raise ValueError("row_ids must be unique")
        if not np.isfinite(self.scores).all():
            raise ValueError("scores must be finite")
        if self.centered and self.center_axis == CENTER_ROW and len(self.scores):
            if np.abs(self.scores.sum(axis=1)).max() > _ROW_SUM_TOL:
                raise ValueError("centered rows must sum to 0")
        if not self.content_hash:
            object.__setattr__(self, "content_hash", _content_hash(self.row_ids, self.scores))

    @property
    def n_classes(self) -> int:
        return self.scores.shape[1]

    def positions_of(self, row_ids) -> np.ndarray:
        index = {int(r): i for i, r in enumerate(self.row_ids)}
        missing = [int(r) for r in row_ids if int(r) not in index]
        if missing:
            raise UncoveredRowsError(
                f"uncovered rows: {missing[:10]}{'...' if len(missing) > 10 else ''}"
            )
        return np.array([index[int(r)] for r in row_ids], dtype=np.int64)


def center_matrix(scores: np.ndarray, axis: str = CENTER_ROW) -> np.ndarray:
    """Subtract the mean over classes (row) or over rows (column)."""
    scores = np.asarray(scores, dtype=np.float64)
    if axis == CENTER_ROW:
        return scores - scores.mean(axis=1, keepdims=True)
    if axis == CENTER_COLUMN:
        return scores - scores.mean(axis=0, keepdims=True)
    raise ValueError(f"unknown centering axis {axis!r}")


def center_scores(raw: PriorScores, axis: str = CENTER_ROW) -> PriorScores:
    """Center raw scores; the raw content hash is preserved so a fused model
    can still recognise its score file."""
    if raw.centered:
        raise ValueError("scores are already centered")
    if not np.isfinite(raw.scores).all():
        raise ValueError("scores must be finite")
    return replace(raw, scores=center_matrix(raw.scores, axis), centered=True, center_axis=axis)


def scale_to_margins(centered_scores: np.ndarray, s: float, objective: str) -> np.ndarray:
    """Scaled margins from centered scores: full matrix for softmax, the
    positive-class column (class index 1) for the binary objective."""
    s = validate_scale(s)
    scores = np.asarray(centered_scores, dtype=np.float64)
    if objective == engine.BINARY_LOGISTIC:
        if scores.shape[1] != 2:
            raise ValueError(f"binary objective needs 2 score columns, got {scores.shape[1]}")
        out = scores[:, 1].reshape(-1, 1)
    elif objective == engine.MULTICLASS_SOFTMAX:
        out = scores
    else:
        raise ValueError(f"unknown objective {objective!r}")
    if s == 0.0:
        return np.zeros_like(out)
    return s * out


def scores_to_margins(prior: PriorScores, s: float, objective: str) -> np.ndarray:
    if not prior.centered:
        raise ValueError("scores must be centered before scaling to margins")
    k = prior.n_classes
    if objective == engine.BINARY_LOGISTIC and k != 2:
        raise ValueError(f"binary objective needs 2 score columns, got {k}")
    return scale_to_margins(prior.scores, s, objective)


@dataclass(frozen=True)
class FusedModel:
    """Residual ensemble plus the scale and the identity of its prior."""

    ensemble: engine.Ensemble
    scale: float
    prior_hash: str
    center_axis: str
    class_labels: tuple

    def __post_init__(self):
        if self.ensemble.base_margin_source != engine.EXTERNAL_MARGIN:
            raise ValueError("fused ensembles must use external base margins")


def _prepared(prior: PriorScores, center_axis: str) -> PriorScores:
    if prior.centered:
        if prior.center_axis != center_axis:
            raise ValueError(
                f"prior centered along {prior.center_axis!r}, model expects {center_axis!r}"
            )
        return prior
    return center_scores(prior, center_axis)


def train_fused(
    dataset: Dataset,
    split: SplitSpec,
    prior: PriorScores,
    s: float,
    params: engine.GbdtParams,
    seed: int,
    objective: str | None = None,
    center_axis: str = CENTER_ROW,
) -> FusedModel:
    """Fit the residual GBDT with margins = s * centered scores on the train rows.

    The prior must cover train, val and test rows up front, so the fitted
    model is guaranteed evaluable.
    """
    prior = _prepared(prior, center_axis)
    for ids in (split.train_ids, split.val_ids, split.test_ids):
        prior.positions_of(ids)
    objective = objective or (
        engine.BINARY_LOGISTIC if dataset.n_classes == 2 else engine.MULTICLASS_SOFTMAX
    )
    train_pos = dataset.positions_of(split.train_ids)
    margins = scores_to_margins(prior, s, objective)[prior.positions_of(split.train_ids)]
    ensemble = engine.train(
        dataset.features[train_pos],
        dataset.labels[train_pos],
        params,
        objective,
        dataset.n_classes,
        base_margin=margins,
        seed=seed,
        base_margin_source=engine.EXTERNAL_MARGIN,
    )
    return FusedModel(
        ensemble=ensemble,
        scale=validate_scale(s),
        prior_hash=prior.content_hash,
        center_axis=center_axis,
        class_labels=tuple(dataset.schema.class_labels),
    )


def predict_fused_margin(
    model: FusedModel, dataset: Dataset, row_ids, prior: PriorScores
) -> np.ndarray:
    """Raw fused margins for the requested rows; the prior is mandatory."""
    prior = _prepared(prior, model.center_axis)
    if prior.content_hash != model.prior_hash:
        raise ValueError("prior scores do not match the ones this model was trained with")
    pos = dataset.positions_of(row_ids)
    margins = scores_to_margins(prior, model.scale, model.ensemble.objective)[
        prior.positions_of(row_ids)
    ]
    return engine.predict_margin(model.ensemble, dataset.features[pos], margins)


def predict_fused(model: FusedModel, dataset: Dataset, row_ids, prior: PriorScores) -> np.ndarray:
    """Probability matrix for the requested rows; the prior is mandatory."""
    out = predict_fused_margin(model, dataset, row_ids, prior)
    return engine.predict_proba(out, model.ensemble.objective)


def prior_margins(prior: PriorScores, row_ids, objective: str) -> np.ndarray:
    """Margins of the prior alone (the num_rounds=0 fused model at s=1)."""
    prior = _prepared(prior, prior.center_axis if prior.centered else CENTER_ROW)
    return scores_to_margins(prior, 1.0, objective)[prior.positions_of(row_ids)]


def prior_proba(prior: PriorScores, row_ids, objective: str) -> np.ndarray:
    """Probabilities of the prior alone (the num_rounds=0 fused model at s=1)."""
    return engine.predict_proba(prior_margins(prior, row_ids, objective), objective)


# -- score file format --------------------------------------------------------
# Optional comment line `# source=<llm|tabpfn|synthetic> model=<text>`, then
# header `row_id,<class_0>,...,<class_{K-1}>`, then one raw score row per
# dataset row. Class names must match the schema exactly and in order.


def write_score_file(path, prior: PriorScores, class_labels) -> None:
    if prior.centered:
        raise ValueError("score files hold raw scores; centering happens at load")
    if len(class_labels) != prior.n_classes:
        raise ValueError("class label count does not match score columns")
    lines = []
    comment = f"# source={prior.source}"
    if prior.model:
        comment += f" model={prior.model}"
    lines.append(comment)
    lines.append("row_id," + ",".join(class_labels))
    for rid, row in zip(prior.row_ids, prior.scores):
        lines.append(str(int(rid)) + "," + ",".join(repr(float(v)) for v in row))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_score_file(path, class_labels) -> PriorScores:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty score file")
    source, model = "synthetic", ""
    if lines[0].startswith("#"):
        for token in lines[0][1:].split():
            if token.startswith("source="):
                source = token[len("source="):]
            elif token.startswith("model="):
                model = token[len("model="):]
        lines = lines[1:]
    header = lines[0].split(",")
    if header[0] != "row_id":
        raise ValueError(f"{path}: first header field must be 'row_id'")
    if tuple(header[1:]) != tuple(class_labels):
        raise ValueError(
            f"{path}: class names {header[1:]} do not match schema classes {list(class_labels)}"
        )
    row_ids, rows = [], []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != len(header):
            raise ValueError(f"{path}: ragged score row {ln!r}")
        row_ids.append(int(parts[0]))
        rows.append([float(v) for v in parts[1:]])
    return PriorScores(
        row_ids=np.array(row_ids, dtype=np.int64),
        scores=np.array(rows, dtype=np.float64),
        source=source,
        model=model,
    )
