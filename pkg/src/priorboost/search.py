"""Random-search hyperparameter optimization over the two built-in spaces,
plus the two-stage protocol: tune the GBDT, then tune the fusion scale.

Every trial derives its sampling stream and its model seed from
SeedSequence([study_seed, trial_index, ...]), so trials are independent of
execution order and safe to run in parallel.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import engine, metrics
from .datasets import Dataset, SplitSpec
from .fusion import PriorScores, scores_to_margins

XGBOOST_STYLE = "xgboost_style"
LIGHTGBM_STYLE = "lightgbm_style"
SPACE_KINDS = (XGBOOST_STYLE, LIGHTGBM_STYLE)

_SAMPLE_STREAM = 0
_MODEL_STREAM = 1


@dataclass(frozen=True)
class UniformInt:
    lo: int
    hi: int  # inclusive

    def draw(self, rng: np.random.Generator):
        return int(rng.integers(self.lo, self.hi + 1))


@dataclass(frozen=True)
class Uniform:
    lo: float
    hi: float

    def draw(self, rng: np.random.Generator):
        return float(rng.uniform(self.lo, self.hi))


@dataclass(frozen=True)
class LogUniform:
    lo: float
    hi: float

    def __post_init__(self):
        if not 0 < self.lo <= self.hi:
            raise ValueError("log-uniform bounds must be positive with lo <= hi")

    def draw(self, rng: np.random.Generator):
        return float(math.exp(rng.uniform(math.log(self.lo), math.log(self.hi))))


@dataclass(frozen=True)
class MaybeZeroLogUniform:
    """The "{0, LogUniform[lo, hi]}" pattern: exactly 0 with probability 1/2,
    otherwise log-uniform."""

    lo: float
    hi: float

    def draw(self, rng: np.random.Generator):
        if rng.random() < 0.5:
            return 0.0
        return LogUniform(self.lo, self.hi).draw(rng)


#: Distribution of the fusion scale s.
SCALE_DISTRIBUTION = MaybeZeroLogUniform(1e-4, 1e4)

XGBOOST_SPACE = {
    "max_depth": UniformInt(3, 10),
    "min_child_weight": LogUniform(1e-8, 1e5),
    "subsample": Uniform(0.5, 1.0),
    "learning_rate": LogUniform(1e-5, 1.0),
    "colsample_bylevel": Uniform(0.5, 1.0),
    "colsample_bytree": Uniform(0.5, 1.0),
    "gamma": MaybeZeroLogUniform(1e-8, 1e2),
    "reg_lambda": MaybeZeroLogUniform(1e-8, 1e2),
    "reg_alpha": MaybeZeroLogUniform(1e-8, 1e2),
}
XGBOOST_NUM_ROUNDS = 20

LIGHTGBM_SPACE = {
    "num_leaves": UniformInt(2, 256),
    "feature_fraction": Uniform(0.4, 1.0),
    "bagging_fraction": Uniform(0.4, 1.0),
    "bagging_freq": UniformInt(1, 7),
    "min_child_samples": UniformInt(5, 100),
    "lambda_l1": MaybeZeroLogUniform(1e-8, 10.0),
    "lambda_l2": MaybeZeroLogUniform(1e-8, 10.0),
}
LIGHTGBM_NUM_ROUNDS = 100
_LIGHTGBM_LEARNING_RATE = 0.1  # fixed; not a tuned parameter of this space


def get_space(kind: str) -> dict:
    if kind == XGBOOST_STYLE:
        return XGBOOST_SPACE
    if kind == LIGHTGBM_STYLE:
        return LIGHTGBM_SPACE
    raise ValueError(f"unknown space kind {kind!r}")


def sample(space: dict, rng: np.random.Generator) -> dict:
    """Draw each parameter independently, in the space's key order."""
    return {name: dist.draw(rng) for name, dist in space.items()}


def to_engine_params(assignment: dict, kind: str) -> engine.GbdtParams:
    """Map a sampled assignment onto the engine's parameter vector."""
    if kind == XGBOOST_STYLE:
        return engine.GbdtParams(num_rounds=XGBOOST_NUM_ROUNDS, **assignment)
    if kind == LIGHTGBM_STYLE:
        # Depth-wise analogue of a leaf cap: a depth-d tree has <= 2^d leaves.
        depth = max(1, math.ceil(math.log2(assignment["num_leaves"])))
        return engine.GbdtParams(
            max_depth=depth,
            min_child_weight=0.0,
            subsample=assignment["bagging_fraction"],
            learning_rate=_LIGHTGBM_LEARNING_RATE,
            colsample_bylevel=1.0,
            colsample_bytree=assignment["feature_fraction"],
            gamma=0.0,
            reg_lambda=assignment["lambda_l2"],
            reg_alpha=assignment["lambda_l1"],
            num_rounds=LIGHTGBM_NUM_ROUNDS,
            min_child_samples=assignment["min_child_samples"],
            subsample_freq=assignment["bagging_freq"],
        )
    raise ValueError(f"unknown space kind {kind!r}")


@dataclass(frozen=True)
class Trial:
    index: int
    params: dict  # sampled assignment (space-native names); includes "scale" in stage 2
    seed: int  # model training seed
    val_auc: float | None  # None == failed
    error: str = ""

    @property
    def failed(self) -> bool:
        return self.val_auc is None


@dataclass(frozen=True)
class StudyResult:
    trials: tuple

    @property
    def best(self) -> Trial:
        """Argmax validation AUC over non-failed trials; ties go to the lowest index."""
        best = None
        for t in self.trials:
            if t.failed:
                continue
            if best is None or t.val_auc > best.val_auc:
                best = t
        if best is None:
            raise RuntimeError("all trials failed")
        return best

    def log_lines(self) -> list:
        out = []
        for t in self.trials:
            val = "failed" if t.failed else repr(t.val_auc)
            out.append(f"{t.index},{json.dumps(t.params, sort_keys=True)},{val}")
        return out

    def truncated(self, budget: int) -> "StudyResult":
        """The study that a smaller budget would have produced (trial streams
        are index-scoped, so a prefix is bit-identical to a fresh study)."""
        return StudyResult(trials=self.trials[:budget])


def trial_seed(study_seed: int, index: int) -> int:
    return int(
        np.random.SeedSequence([int(study_seed), index, _MODEL_STREAM]).generate_state(1)[0]
    )


def _trial_rng(study_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence([int(study_seed), index, _SAMPLE_STREAM])
    )


def _split_arrays(dataset: Dataset, split: SplitSpec):
    tr = dataset.positions_of(split.train_ids)
    va = dataset.positions_of(split.val_ids)
    return tr, va


def tune_gbdt(
    dataset: Dataset,
    split: SplitSpec,
    space_kind: str,
    budget: int,
    base_margins: np.ndarray | None,
    seed: int,
    objective: str | None = None,
) -> StudyResult:
    """Train `budget` sampled configurations on the train rows (with the given
    full-dataset base margins, zeros when None) and score each on validation AUC."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    space = get_space(space_kind)
    objective = objective or (
        engine.BINARY_LOGISTIC if dataset.n_classes == 2 else engine.MULTICLASS_SOFTMAX
    )
    tr, va = _split_arrays(dataset, split)
    X_tr, y_tr = dataset.features[tr], dataset.labels[tr]
    X_va, y_va = dataset.features[va], dataset.labels[va]
    n_cols = engine.margin_columns(objective, dataset.n_classes)
    if base_margins is None:
        base_margins = np.zeros((dataset.n_rows, n_cols))
    m_tr, m_va = base_margins[tr], base_margins[va]

    trials = []
    for i in range(budget):
        assignment = sample(space, _trial_rng(seed, i))
        model_seed = trial_seed(seed, i)
        try:
            params = to_engine_params(assignment, space_kind)
            ens = engine.train(
                X_tr, y_tr, params, objective, dataset.n_classes,
                base_margin=m_tr, seed=model_seed,
            )
            val_auc = metrics.auc_from_margins(
                engine.predict_margin(ens, X_va, m_va), y_va, objective
            )
            trials.append(Trial(index=i, params=assignment, seed=model_seed, val_auc=val_auc))
        except (ValueError, ArithmeticError) as exc:
            trials.append(
                Trial(index=i, params=assignment, seed=model_seed, val_auc=None, error=str(exc))
            )
    result = StudyResult(trials=tuple(trials))
    result.best  # raises if every trial failed
    return result


def tune_scale(
    dataset: Dataset,
    split: SplitSpec,
    prior: PriorScores,
    fixed_params: engine.GbdtParams,
    budget: int,
    seed: int,
    objective: str | None = None,
    train_seed: int | None = None,
) -> tuple:
    """Stage 2: sample the scale s with the GBDT parameters frozen.

    Trial 0 is always s=0, and every trial trains with the same model seed
    (`train_seed`, normally the stage-1 best trial's), so the fused model can
    never tune below the plain GBDT on validation.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if not prior.centered:
        raise ValueError("prior must be centered before scale tuning")
    objective = objective or (
        engine.BINARY_LOGISTIC if dataset.n_classes == 2 else engine.MULTICLASS_SOFTMAX
    )
    if train_seed is None:
        train_seed = trial_seed(seed, 0)
    tr, va = _split_arrays(dataset, split)
    X_tr, y_tr = dataset.features[tr], dataset.labels[tr]
    X_va, y_va = dataset.features[va], dataset.labels[va]

    trials = []
    for i in range(budget):
        s = 0.0 if i == 0 else SCALE_DISTRIBUTION.draw(_trial_rng(seed, i))
        try:
            margins = scores_to_margins(prior, s, objective)
            m_tr = margins[prior.positions_of(split.train_ids)]
            m_va = margins[prior.positions_of(split.val_ids)]
            ens = engine.train(
                X_tr, y_tr, fixed_params, objective, dataset.n_classes,
                base_margin=m_tr, seed=train_seed,
                base_margin_source=engine.EXTERNAL_MARGIN,
            )
            val_auc = metrics.auc_from_margins(
                engine.predict_margin(ens, X_va, m_va), y_va, objective
            )
            trials.append(Trial(index=i, params={"scale": s}, seed=train_seed, val_auc=val_auc))
        except (ValueError, ArithmeticError) as exc:
            trials.append(
                Trial(index=i, params={"scale": s}, seed=train_seed, val_auc=None, error=str(exc))
            )
    result = StudyResult(trials=tuple(trials))
    best = result.best
    return best.params["scale"], result
