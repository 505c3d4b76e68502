"""Prior-seeded gradient boosting: train GBDTs on the residual of scaled
transformer scores, plus the benchmark harness around them."""

from .baselines import METHOD_TAGS, select_best, stack_features
from .datasets import (
    FULL,
    Dataset,
    SplitSpec,
    TableSchema,
    infer_schema,
    load_csv,
    make_splits,
    shuffle_headers,
)
from .engine import (
    BINARY_LOGISTIC,
    MULTICLASS_SOFTMAX,
    Ensemble,
    GbdtParams,
    find_best_split,
    leaf_weight,
    load_ensemble,
    predict_margin,
    predict_proba,
    save_ensemble,
    train,
)
from .estimators import BoostedTreesClassifier, PriorBoostedClassifier
from .fusion import (
    FusedModel,
    PriorScores,
    center_scores,
    predict_fused,
    read_score_file,
    scores_to_margins,
    train_fused,
    write_score_file,
)
from .metrics import EvalRecord, aggregate, auc_binary, auc_multiclass, ranks, zscores
from .search import StudyResult, Trial, sample, tune_gbdt, tune_scale
from .synthetic import SyntheticSpec, generate, make_prior

__version__ = "0.1.0"

__all__ = [
    "BINARY_LOGISTIC",
    "MULTICLASS_SOFTMAX",
    "BoostedTreesClassifier",
    "Dataset",
    "Ensemble",
    "EvalRecord",
    "FULL",
    "FusedModel",
    "GbdtParams",
    "METHOD_TAGS",
    "PriorBoostedClassifier",
    "PriorScores",
    "SplitSpec",
    "StudyResult",
    "SyntheticSpec",
    "TableSchema",
    "Trial",
    "aggregate",
    "auc_binary",
    "auc_multiclass",
    "center_scores",
    "find_best_split",
    "generate",
    "infer_schema",
    "leaf_weight",
    "load_csv",
    "load_ensemble",
    "make_prior",
    "make_splits",
    "predict_fused",
    "predict_margin",
    "predict_proba",
    "ranks",
    "read_score_file",
    "sample",
    "save_ensemble",
    "scores_to_margins",
    "select_best",
    "shuffle_headers",
    "stack_features",
    "train",
    "train_fused",
    "tune_gbdt",
    "tune_scale",
    "write_score_file",
    "zscores",
]
