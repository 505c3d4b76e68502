"""Input validation helpers shared by the estimators and the harness."""

from __future__ import annotations

import numpy as np


def check_feature_matrix(X, *, name: str = "X") -> np.ndarray:
    """Coerce to a 2-D float64 matrix. NaN is allowed (missing marker), inf is not."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {X.shape}")
    if np.isinf(X).any():
        raise ValueError(f"{name} contains infinite values; only NaN marks missing entries")
    return X


def check_labels(y, n_classes: int | None = None, *, name: str = "y") -> np.ndarray:
    """Coerce to a 1-D array of non-negative class indices."""
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {y.shape}")
    if y.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.issubdtype(y.dtype, np.integer):
        yi = y.astype(np.int64)
        if not np.array_equal(yi, y):
            raise ValueError(f"{name} must hold integer class indices")
        y = yi
    else:
        y = y.astype(np.int64)
    if y.min() < 0:
        raise ValueError(f"{name} contains negative class indices")
    if n_classes is not None and y.max() >= n_classes:
        raise ValueError(f"{name} contains index {y.max()} but only {n_classes} classes exist")
    return y


def check_margin_matrix(margins, n_rows: int, n_columns: int, *, name: str = "base_margin") -> np.ndarray:
    """Coerce to an (n_rows, n_columns) float64 matrix of finite margins."""
    m = np.asarray(margins, dtype=np.float64)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.shape != (n_rows, n_columns):
        raise ValueError(f"{name} has shape {m.shape}, expected {(n_rows, n_columns)}")
    if not np.isfinite(m).all():
        raise ValueError(f"{name} contains non-finite values")
    return m


def check_same_length(name_a: str, a, name_b: str, b) -> None:
    if len(a) != len(b):
        raise ValueError(f"{name_a} has length {len(a)} but {name_b} has length {len(b)}")
