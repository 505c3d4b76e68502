"""Prior centering, scaling, fused training/prediction, and the score file format."""

import numpy as np
import pytest

from priorboost import engine, fusion
from priorboost.datasets import NUMERIC, ColumnSpec, Dataset, TableSchema, make_splits
from priorboost.engine import BINARY_LOGISTIC, MULTICLASS_SOFTMAX, GbdtParams
from priorboost.fusion import (
    PriorScores,
    UncoveredRowsError,
    center_scores,
    predict_fused,
    predict_fused_margin,
    prior_margins,
    read_score_file,
    scores_to_margins,
    train_fused,
    write_score_file,
)
from priorboost.metrics import auc_from_margins


def _prior(scores, source="synthetic", row_ids=None):
    scores = np.asarray(scores, dtype=np.float64)
    if row_ids is None:
        row_ids = np.arange(len(scores))
    return PriorScores(row_ids=np.asarray(row_ids), scores=scores, source=source)


def _binary_dataset(n=200, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, 4))
    logits = X[:, 0] + 0.5 * X[:, 1]
    y = (logits + 0.5 * rng.normal(size=n) > 0).astype(np.int64)
    schema = TableSchema(
        columns=tuple(ColumnSpec(f"f{j}", NUMERIC) for j in range(4)),
        target="y",
        class_labels=("no", "yes"),
    )
    ds = Dataset(features=X, labels=y, row_ids=np.arange(n), schema=schema)
    true_scores = np.column_stack([-logits / 2, logits / 2])
    return ds, true_scores


class TestCenterScores:
    def test_row_mean_subtraction(self):
        out = center_scores(_prior([[2.0, 4.0]]))
        np.testing.assert_array_equal(out.scores, [[-1.0, 1.0]])

    def test_already_zero_rows(self):
        out = center_scores(_prior([[0.0, 0.0, 0.0]]))
        np.testing.assert_array_equal(out.scores, [[0.0, 0.0, 0.0]])

    def test_three_class_row(self):
        out = center_scores(_prior([[-1.5, 0.5, 4.0]]))
        np.testing.assert_allclose(out.scores, [[-2.5, -0.5, 3.0]], atol=1e-15)

    def test_double_centering_rejected(self):
        centered = center_scores(_prior([[1.0, 2.0]]))
        with pytest.raises(ValueError, match="already centered"):
            center_scores(centered)

    def test_column_axis(self):
        out = center_scores(_prior([[1.0, 5.0], [3.0, 7.0]]), axis="column")
        np.testing.assert_array_equal(out.scores, [[-1.0, -1.0], [1.0, 1.0]])
        assert out.center_axis == "column"

    def test_hash_survives_centering(self):
        raw = _prior([[1.0, 2.0], [0.5, -0.5]])
        assert center_scores(raw).content_hash == raw.content_hash

    def test_per_row_constant_invariance(self):
        # adding any per-row constant to raw scores leaves margins unchanged
        rng = np.random.default_rng(1)
        raw = rng.normal(size=(20, 3))
        shift = rng.normal(size=(20, 1))
        a = center_scores(_prior(raw))
        b = center_scores(_prior(raw + shift))
        np.testing.assert_allclose(a.scores, b.scores, atol=1e-12)


class TestScoresToMargins:
    def test_scale_zero_gives_exact_zeros(self):
        centered = center_scores(_prior([[-1.0, 1.0], [2.0, -2.0]]))
        out = scores_to_margins(centered, 0.0, BINARY_LOGISTIC)
        assert np.array_equal(out, np.zeros((2, 1)))

    def test_binary_positive_class_column(self):
        centered = center_scores(_prior([[-1.0, 1.0]]))
        out = scores_to_margins(centered, 2.0, BINARY_LOGISTIC)
        assert out[0, 0] == 2.0

    def test_doubling_scale_doubles_margins(self):
        centered = center_scores(_prior(np.random.default_rng(2).normal(size=(10, 3))))
        a = scores_to_margins(centered, 1.5, MULTICLASS_SOFTMAX)
        b = scores_to_margins(centered, 3.0, MULTICLASS_SOFTMAX)
        np.testing.assert_allclose(b, 2 * a, rtol=1e-15)

    def test_uncentered_rejected(self):
        with pytest.raises(ValueError, match="centered"):
            scores_to_margins(_prior([[1.0, 2.0]]), 1.0, BINARY_LOGISTIC)

    def test_class_count_mismatch(self):
        centered = center_scores(_prior([[0.0, 1.0, 2.0]]))
        with pytest.raises(ValueError):
            scores_to_margins(centered, 1.0, BINARY_LOGISTIC)

    def test_scale_range_enforced(self):
        centered = center_scores(_prior([[0.0, 1.0]]))
        with pytest.raises(ValueError, match="scale"):
            scores_to_margins(centered, 1e-5, BINARY_LOGISTIC)


class TestFusedTraining:
    def test_scale_zero_equals_plain_gbdt_bit_exact(self):
        ds, scores = _binary_dataset()
        (split,) = make_splits(ds, [40], [0])
        prior = _prior(scores)
        params = GbdtParams(max_depth=3, num_rounds=10)
        model = train_fused(ds, split, prior, 0.0, params, seed=5)

        train_pos = ds.positions_of(split.train_ids)
        plain = engine.train(
            ds.features[train_pos], ds.labels[train_pos], params, BINARY_LOGISTIC, 2, seed=5
        )
        test_pos = ds.positions_of(split.test_ids)
        fused_proba = predict_fused(model, ds, split.test_ids, prior)
        plain_proba = engine.predict_proba(
            engine.predict_margin(plain, ds.features[test_pos]), BINARY_LOGISTIC
        )
        assert np.array_equal(fused_proba, plain_proba)

    def test_zero_rounds_auc_equals_prior_auc(self):
        ds, scores = _binary_dataset()
        (split,) = make_splits(ds, [40], [0])
        prior = _prior(scores)
        test_pos = ds.positions_of(split.test_ids)
        y_test = ds.labels[test_pos]
        prior_auc = auc_from_margins(
            prior_margins(prior, split.test_ids, BINARY_LOGISTIC), y_test, BINARY_LOGISTIC
        )
        for s in (1e-4, 1.0, 1e4):
            model = train_fused(ds, split, prior, s, GbdtParams(num_rounds=0), seed=1)
            fused_auc = auc_from_margins(
                predict_fused_margin(model, ds, split.test_ids, prior), y_test, BINARY_LOGISTIC
            )
            assert abs(fused_auc - prior_auc) <= 1e-12

    def test_multiclass_zero_round_argmax_matches_prior(self):
        rng = np.random.default_rng(7)
        n = 100
        X = rng.normal(size=(n, 3))
        y = rng.integers(0, 3, size=n)
        schema = TableSchema(
            columns=tuple(ColumnSpec(f"f{j}", NUMERIC) for j in range(3)),
            target="y",
            class_labels=("a", "b", "c"),
        )
        ds = Dataset(features=X, labels=y, row_ids=np.arange(n), schema=schema)
        (split,) = make_splits(ds, [20], [0])
        prior = _prior(rng.normal(size=(n, 3)))
        centered = center_scores(prior)
        expected = np.argmax(
            centered.scores[centered.positions_of(split.test_ids)], axis=1
        )
        for s in (1e-3, 1.0, 1e3):
            model = train_fused(ds, split, prior, s, GbdtParams(num_rounds=0), seed=0)
            proba = predict_fused(model, ds, split.test_ids, prior)
            np.testing.assert_array_equal(np.argmax(proba, axis=1), expected)

    def test_zero_trees_sigmoid_value(self):
        ds, _ = _binary_dataset(n=50)
        (split,) = make_splits(ds, [10], [0])
        scores = np.tile([-1.0, 1.0], (50, 1))
        prior = _prior(scores)
        model = train_fused(ds, split, prior, 1.0, GbdtParams(num_rounds=0), seed=0)
        proba = predict_fused(model, ds, [int(split.test_ids[0])], prior)
        assert proba[0, 1] == pytest.approx(0.7310585786300049, abs=1e-9)

    def test_uncovered_rows_fail_loudly(self):
        ds, scores = _binary_dataset(n=60)
        (split,) = make_splits(ds, [10], [0])
        short = _prior(scores[:30], row_ids=np.arange(30))
        with pytest.raises(UncoveredRowsError):
            train_fused(ds, split, short, 1.0, GbdtParams(num_rounds=1), seed=0)

    def test_prior_hash_mismatch_rejected(self):
        ds, scores = _binary_dataset(n=80)
        (split,) = make_splits(ds, [15], [0])
        prior = _prior(scores)
        model = train_fused(ds, split, prior, 1.0, GbdtParams(num_rounds=2), seed=0)
        other = _prior(scores + 0.1)
        with pytest.raises(ValueError, match="do not match"):
            predict_fused(model, ds, split.test_ids, other)

    def test_row_permutation_equivariance(self):
        ds, scores = _binary_dataset(n=60)
        (split,) = make_splits(ds, [10], [0])
        prior = _prior(scores)
        model = train_fused(ds, split, prior, 1.0, GbdtParams(num_rounds=3), seed=2)
        ids = split.test_ids
        perm = np.random.default_rng(0).permutation(len(ids))
        direct = predict_fused(model, ds, ids, prior)
        permuted = predict_fused(model, ds, ids[perm], prior)
        np.testing.assert_array_equal(permuted, direct[perm])


class TestScoreFile:
    def test_round_trip_full_precision(self, tmp_path):
        rng = np.random.default_rng(11)
        prior = _prior(rng.normal(size=(25, 3)) * 1e3)
        path = tmp_path / "scores.csv"
        write_score_file(path, prior, ["a", "b", "c"])
        loaded = read_score_file(path, ["a", "b", "c"])
        assert np.array_equal(loaded.scores, prior.scores)
        assert np.array_equal(loaded.row_ids, prior.row_ids)
        assert loaded.source == "synthetic"

    def test_class_name_mismatch_rejected(self, tmp_path):
        prior = _prior(np.zeros((2, 2)))
        path = tmp_path / "scores.csv"
        write_score_file(path, prior, ["a", "b"])
        with pytest.raises(ValueError, match="class names"):
            read_score_file(path, ["a", "c"])
        with pytest.raises(ValueError, match="class names"):
            read_score_file(path, ["b", "a"])  # order matters

    def test_comment_line_parsed(self, tmp_path):
        path = tmp_path / "scores.csv"
        path.write_text("# source=tabpfn model=v2\nrow_id,a,b\n0,1.0,2.0\n")
        loaded = read_score_file(path, ["a", "b"])
        assert loaded.source == "tabpfn"
        assert loaded.model == "v2"

    def test_centered_scores_refused_on_write(self, tmp_path):
        centered = center_scores(_prior([[1.0, 3.0]]))
        with pytest.raises(ValueError, match="raw"):
            write_score_file(tmp_path / "x.csv", centered, ["a", "b"])

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            _prior([[np.inf, 0.0]])
