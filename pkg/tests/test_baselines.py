"""Selection and Stacking baselines."""

import numpy as np
import pytest

from priorboost import engine
from priorboost.baselines import (
    METHOD_GBDT,
    METHOD_PRIOR,
    select_best,
    stack_features,
    unstack_features,
)
from priorboost.datasets import NUMERIC, ColumnSpec, Dataset, TableSchema
from priorboost.engine import BINARY_LOGISTIC, GbdtParams
from priorboost.fusion import PriorScores, center_scores


def _dataset(n=20, n_features=3, n_classes=2, seed=0):
    rng = np.random.default_rng(seed)
    schema = TableSchema(
        columns=tuple(ColumnSpec(f"f{j}", NUMERIC) for j in range(n_features)),
        target="y",
        class_labels=tuple(f"c{k}" for k in range(n_classes)),
    )
    return Dataset(
        features=rng.normal(size=(n, n_features)),
        labels=rng.integers(0, n_classes, size=n),
        row_ids=np.arange(n),
        schema=schema,
    )


def _centered_prior(n, k, seed=0):
    rng = np.random.default_rng(seed)
    raw = PriorScores(row_ids=np.arange(n), scores=rng.normal(size=(n, k)), source="synthetic")
    return center_scores(raw)


class TestSelectBest:
    def test_prior_wins(self):
        assert select_best(0.75, 0.80) == METHOD_PRIOR

    def test_gbdt_wins(self):
        assert select_best(0.80, 0.75) == METHOD_GBDT

    def test_tie_goes_to_gbdt(self):
        assert select_best(0.80, 0.80) == METHOD_GBDT

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            select_best(1.2, 0.5)

    def test_scale_invariant_at_the_argmax(self):
        # multiplying both validation AUCs by a positive constant cannot
        # change the selection
        for a, b in ((0.6, 0.9), (0.9, 0.6), (0.5, 0.5)):
            for c in (0.5, 1.0):
                assert select_best(a, b) == select_best(c * a, c * b)


class TestStackFeatures:
    def test_binary_appends_two_columns(self):
        ds = _dataset(n_features=3, n_classes=2)
        stacked = stack_features(ds, _centered_prior(20, 2))
        assert stacked.features.shape == (20, 5)
        assert stacked.schema.feature_names[-2:] == ("__prior_c0", "__prior_c1")

    def test_appended_values_match_centered_scores(self):
        ds = _dataset()
        prior = _centered_prior(20, 2)
        stacked = stack_features(ds, prior)
        np.testing.assert_array_equal(stacked.features[:, 3:], prior.scores)

    def test_uncentered_rejected(self):
        ds = _dataset()
        raw = PriorScores(row_ids=np.arange(20), scores=np.zeros((20, 2)), source="synthetic")
        with pytest.raises(ValueError, match="centered"):
            stack_features(ds, raw)

    def test_uncovered_rows_rejected(self):
        ds = _dataset(n=20)
        with pytest.raises(KeyError):
            stack_features(ds, _centered_prior(10, 2))

    def test_name_collision_rejected(self):
        schema = TableSchema(
            columns=(ColumnSpec("__prior_c0", NUMERIC),),
            target="y",
            class_labels=("c0", "c1"),
        )
        ds = Dataset(
            features=np.zeros((4, 1)),
            labels=np.array([0, 1, 0, 1]),
            row_ids=np.arange(4),
            schema=schema,
        )
        with pytest.raises(ValueError, match="collide"):
            stack_features(ds, _centered_prior(4, 2))

    def test_non_destructive_round_trip(self):
        ds = _dataset()
        stacked = stack_features(ds, _centered_prior(20, 2))
        recovered = unstack_features(stacked)
        np.testing.assert_array_equal(recovered.features, ds.features)
        assert recovered.schema == ds.schema
        np.testing.assert_array_equal(recovered.labels, ds.labels)

    def test_constant_prior_columns_never_split(self):
        # all-zero stacked scores are constant columns: no positive-gain split
        # exists on them, so training reduces to the plain feature set
        ds = _dataset(n=40, seed=3)
        zero_prior = PriorScores(
            row_ids=np.arange(40), scores=np.zeros((40, 2)), source="synthetic",
            centered=True,
        )
        stacked = stack_features(ds, zero_prior)
        params = GbdtParams(num_rounds=5, max_depth=3)
        model = engine.train(
            stacked.features, stacked.labels, params, BINARY_LOGISTIC, 2, seed=0
        )
        used = {nd.feature for _, _, arena in model.trees for nd in arena if not nd.is_leaf}
        assert used.isdisjoint({3, 4})
