"""The two ensembling baselines: validation-based Selection, and Stacking
transformer scores as extra feature columns."""

from __future__ import annotations

import numpy as np

from .datasets import NUMERIC, ColumnSpec, Dataset, TableSchema
from .fusion import PriorScores

METHOD_GBDT = "gbdt"
METHOD_PRIOR = "prior"
METHOD_SELECTION = "selection"
METHOD_STACKING = "stacking"
METHOD_FUSED = "fused"
METHOD_TAGS = (METHOD_GBDT, METHOD_PRIOR, METHOD_SELECTION, METHOD_STACKING, METHOD_FUSED)

STACK_PREFIX = "__prior_"


def select_best(gbdt_val_auc: float, prior_val_auc: float) -> str:
    """Pick the model with the higher validation AUC; ties go to the GBDT."""
    for name, v in (("gbdt_val_auc", gbdt_val_auc), ("prior_val_auc", prior_val_auc)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {v}")
    return METHOD_GBDT if gbdt_val_auc >= prior_val_auc else METHOD_PRIOR


def stack_features(dataset: Dataset, prior: PriorScores) -> Dataset:
    """Append K numeric columns `__prior_<class>` holding the centered scores.

    Non-destructive: dropping the appended columns recovers the input exactly.
    """
    if not prior.centered:
        raise ValueError("stacking consumes centered scores; center the prior first")
    if prior.n_classes != dataset.n_classes:
        raise ValueError("prior class count does not match dataset")
    pos = prior.positions_of(dataset.row_ids)  # raises UncoveredRowsError if short
    stacked_scores = prior.scores[pos]

    new_names = [STACK_PREFIX + label for label in dataset.schema.class_labels]
    collisions = set(new_names) & set(dataset.schema.feature_names)
    if collisions:
        raise ValueError(f"stacked column names collide with existing columns: {sorted(collisions)}")

    columns = dataset.schema.columns + tuple(ColumnSpec(name=n, kind=NUMERIC) for n in new_names)
    schema = TableSchema(
        columns=columns,
        target=dataset.schema.target,
        class_labels=dataset.schema.class_labels,
    )
    return Dataset(
        features=np.hstack([dataset.features, stacked_scores]),
        labels=dataset.labels.copy(),
        row_ids=dataset.row_ids.copy(),
        schema=schema,
        category_maps=dict(dataset.category_maps),
    )


def unstack_features(dataset: Dataset) -> Dataset:
    """Drop the `__prior_*` columns appended by stack_features."""
    keep = [i for i, c in enumerate(dataset.schema.columns) if not c.name.startswith(STACK_PREFIX)]
    schema = TableSchema(
        columns=tuple(dataset.schema.columns[i] for i in keep),
        target=dataset.schema.target,
        class_labels=dataset.schema.class_labels,
    )
    return Dataset(
        features=dataset.features[:, keep].copy(),
        labels=dataset.labels.copy(),
        row_ids=dataset.row_ids.copy(),
        schema=schema,
        category_maps={
            k: v for k, v in dataset.category_maps.items() if not k.startswith(STACK_PREFIX)
        },
    )
