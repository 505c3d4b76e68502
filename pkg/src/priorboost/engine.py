"""Exact-greedy gradient-boosted trees with second-order split gain and an
arbitrary per-row, per-class base margin (the prior-seeding hook).

Determinism contract: (X, y, params, base margin, seed) fully determine the
ensemble byte-for-byte. Every random draw comes from a round-scoped
SeedSequence stream and every tie in split search is broken by
(lower feature index, lower threshold), so results are independent of
scheduling or worker count.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._validation import check_feature_matrix, check_labels, check_margin_matrix

BINARY_LOGISTIC = "binary_logistic"
MULTICLASS_SOFTMAX = "multiclass_softmax"
OBJECTIVES = (BINARY_LOGISTIC, MULTICLASS_SOFTMAX)

CONSTANT_MARGIN = "constant"
EXTERNAL_MARGIN = "external"

_SOFTMAX_HESSIAN_FLOOR = 1e-16
_FORMAT_HEADER = "priorboost-ensemble-v1"


class DegenerateLeafError(ArithmeticError):
    """Raised when a leaf weight has zero denominator (H + lambda == 0)."""


@dataclass(frozen=True)
class GbdtParams:
    """Hyperparameter vector of the boosting engine.

    `min_child_samples` and `subsample_freq` exist so the LightGBM-style
    search space can drive the same engine; both are inert at their defaults.
    """

    max_depth: int = 6
    min_child_weight: float = 1.0
    subsample: float = 1.0
    learning_rate: float = 0.3
    colsample_bylevel: float = 1.0
    colsample_bytree: float = 1.0
    gamma: float = 0.0
    reg_lambda: float = 1.0
    reg_alpha: float = 0.0
    num_rounds: int = 20
    min_child_samples: int = 0
    subsample_freq: int = 1

    def __post_init__(self):
        if not 1 <= self.max_depth <= 64:
            raise ValueError(f"max_depth must be in [1, 64], got {self.max_depth}")
        for name in ("subsample", "colsample_bylevel", "colsample_bytree"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must be in (0, 1], got {v}")
        if not 0.0 < self.learning_rate <= 1.0:
            # The 1.0 cap keeps the diagonal-Hessian Newton step conservative
            # enough that per-round training loss is non-increasing.
            raise ValueError(f"learning_rate must be in (0, 1], got {self.learning_rate}")
        for name in ("gamma", "reg_lambda", "reg_alpha", "min_child_weight"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")
        if self.num_rounds < 0:
            raise ValueError("num_rounds must be >= 0")
        if self.min_child_samples < 0:
            raise ValueError("min_child_samples must be >= 0")
        if self.subsample_freq < 1:
            raise ValueError("subsample_freq must be >= 1")

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GbdtParams":
        return cls(**json.loads(text))


@dataclass
class TreeNode:
    """Internal node (feature >= 0) or leaf (feature == -1, weight set)."""

    feature: int = -1
    threshold: float = 0.0
    default_left: bool = False
    left: int = -1
    right: int = -1
    weight: float = 0.0
    gain: float = 0.0  # split gain at acceptance; audit only, not serialized

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0


@dataclass(frozen=True)
class SplitCandidate:
    feature: int
    threshold: float
    default_left: bool
    gain: float


@dataclass
class Ensemble:
    """Trained trees plus the margin-seeding configuration."""

    trees: list  # of (round, class_index, list[TreeNode])
    n_classes: int
    objective: str
    params: GbdtParams
    base_margin_source: str = CONSTANT_MARGIN
    base_margin_constant: tuple = ()

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.base_margin_source not in (CONSTANT_MARGIN, EXTERNAL_MARGIN):
            raise ValueError(f"unknown base margin source {self.base_margin_source!r}")
        per_round: dict = {}
        for r, k, _arena in self.trees:
            per_round.setdefault(r, []).append(k)
        expected = list(range(self.n_margin_columns))
        for r, classes in per_round.items():
            if sorted(classes) != expected:
                raise ValueError(
                    f"round {r} has trees for classes {sorted(classes)}, expected {expected}"
                )

    @property
    def n_margin_columns(self) -> int:
        return 1 if self.objective == BINARY_LOGISTIC else self.n_classes


def margin_columns(objective: str, n_classes: int) -> int:
    return 1 if objective == BINARY_LOGISTIC else n_classes


def _child_score(g, h_plus_lambda):
    """G^2 / (H + lambda) with the H+lambda==0 limit: 0 when G==0, +inf otherwise."""
    num = g * g
    return np.where(h_plus_lambda > 0, num / h_plus_lambda, np.where(num == 0, 0.0, np.inf))


def find_best_split(
    X: np.ndarray,
    grad: np.ndarray,
    hess: np.ndarray,
    rows: np.ndarray,
    candidate_features,
    params: GbdtParams,
) -> SplitCandidate | None:
    """Best positive-gain split over midpoints of consecutive distinct values.

    Missing-marker rows are tried on both sides; the better side becomes the
    default direction (ties default right). Ties across candidates go to the
    lower feature index, then the lower threshold.
    """
    rows = np.asarray(rows)
    if rows.size < 1:
        raise ValueError("find_best_split needs at least one row")
    if rows.size < 2:
        return None
    feats = np.array(sorted(int(f) for f in candidate_features), dtype=np.int64)
    lam, gamma = params.reg_lambda, params.gamma
    mcw, mcs = params.min_child_weight, params.min_child_samples
    m, n_feats = rows.size, feats.size

    g_node = grad[rows]
    h_node = hess[rows]
    g_total = g_node.sum()
    h_total = h_node.sum()

    # One vectorized pass over all candidate features: per-column stable sort
    # (NaN sorts last), prefix sums, and both missing-direction gains.
    values = X[np.ix_(rows, feats)]
    order = np.argsort(values, axis=0, kind="stable")
    sv = np.take_along_axis(values, order, axis=0)
    sg = g_node[order]
    sh = h_node[order]
    cg = np.cumsum(sg, axis=0)
    ch = np.cumsum(sh, axis=0)
    missing = np.isnan(sv)
    n_pres = m - missing.sum(axis=0)

    cols = np.arange(n_feats)
    last = np.maximum(n_pres - 1, 0)
    g_pres = np.where(n_pres > 0, cg[last, cols], 0.0)
    h_pres = np.where(n_pres > 0, ch[last, cols], 0.0)
    # direct sums over the NaN tail: exactly 0.0 when a column has no missing
    # rows, so both missing directions stay bit-identical and tie to the right
    g_miss = np.where(missing, sg, 0.0).sum(axis=0)
    h_miss = np.where(missing, sh, 0.0).sum(axis=0)
    n_miss = m - n_pres

    with np.errstate(divide="ignore", invalid="ignore"):
        parent = float(_child_score(np.float64(g_total), np.float64(h_total + lam)))
        # boundary i splits sorted positions [0..i] | [i+1..]; both sides must
        # hold at least one present value
        pos = np.arange(m - 1)[:, None]
        valid = (sv[1:] != sv[:-1]) & (pos + 1 < n_pres)
        thresholds = 0.5 * (sv[:-1] + sv[1:])
        gl, hl, nl = cg[:-1], ch[:-1], pos + 1
        gr, hr, nr = g_pres - gl, h_pres - hl, n_pres - nl

        gain_left = (
            0.5 * (_child_score(gl + g_miss, hl + h_miss + lam) + _child_score(gr, hr + lam) - parent)
            - gamma
        )
        gain_right = (
            0.5 * (_child_score(gl, hl + lam) + _child_score(gr + g_miss, hr + h_miss + lam) - parent)
            - gamma
        )
        ok_left = valid & (hl + h_miss >= mcw) & (hr >= mcw) & (nl + n_miss >= mcs) & (nr >= mcs)
        ok_right = valid & (hl >= mcw) & (hr + h_miss >= mcw) & (nl >= mcs) & (nr + n_miss >= mcs)
        gain_left = np.where(ok_left & ~np.isnan(gain_left), gain_left, -np.inf)
        gain_right = np.where(ok_right & ~np.isnan(gain_right), gain_right, -np.inf)

        default_left = gain_left > gain_right
        gain = np.where(default_left, gain_left, gain_right)

    best: SplitCandidate | None = None
    for j in range(n_feats):  # ascending feature order; first max = lowest threshold
        i = int(np.argmax(gain[:, j]))
        g = gain[i, j]
        if g > 0 and (best is None or g > best.gain):
            best = SplitCandidate(
                feature=int(feats[j]),
                threshold=float(thresholds[i, j]),
                default_left=bool(default_left[i, j]),
                gain=float(g),
            )
    return best


def leaf_weight(g_sum: float, h_sum: float, reg_lambda: float, reg_alpha: float) -> float:
    """Soft-thresholded Newton step: -sign(G) * max(|G| - alpha, 0) / (H + lambda).

    A zero numerator wins over a zero denominator: a leaf with no gradient
    left (or fully L1-shrunk) contributes 0 regardless of curvature.
    """
    shrunk = max(abs(g_sum) - reg_alpha, 0.0)
    if shrunk == 0.0:
        return 0.0
    denom = h_sum + reg_lambda
    if denom == 0.0:
        raise DegenerateLeafError("degenerate leaf: H + lambda == 0")
    return -math.copysign(shrunk / denom, g_sum)


def _grow_tree(
    X: np.ndarray,
    grad: np.ndarray,
    hess: np.ndarray,
    rows: np.ndarray,
    params: GbdtParams,
    level_features: list,
) -> list:
    """Depth-first growth to max_depth; returns the node arena (root at 0)."""
    arena: list[TreeNode] = []

    def build(node_rows: np.ndarray, depth: int) -> int:
        nid = len(arena)
        arena.append(TreeNode())
        cand = None
        if depth < params.max_depth and node_rows.size >= 2:
            cand = find_best_split(X, grad, hess, node_rows, level_features[depth], params)
        if cand is None:
            w = leaf_weight(
                float(grad[node_rows].sum()),
                float(hess[node_rows].sum()),
                params.reg_lambda,
                params.reg_alpha,
            )
            arena[nid] = TreeNode(weight=w)
            return nid
        vals = X[node_rows, cand.feature]
        go_left = np.where(np.isnan(vals), cand.default_left, vals < cand.threshold)
        left_id = build(node_rows[go_left], depth + 1)
        right_id = build(node_rows[~go_left], depth + 1)
        arena[nid] = TreeNode(
            feature=cand.feature,
            threshold=cand.threshold,
            default_left=cand.default_left,
            left=left_id,
            right=right_id,
            gain=cand.gain,
        )
        return nid

    build(np.asarray(rows), 0)
    return arena


def _tree_margins(arena: list, X: np.ndarray) -> np.ndarray:
    """Leaf weight along each row's root-to-leaf path (unscaled)."""
    feat = np.array([nd.feature for nd in arena], dtype=np.int64)
    thr = np.array([nd.threshold for nd in arena])
    dleft = np.array([nd.default_left for nd in arena], dtype=bool)
    left = np.array([nd.left for nd in arena], dtype=np.int64)
    right = np.array([nd.right for nd in arena], dtype=np.int64)
    weight = np.array([nd.weight for nd in arena])
    if (feat >= X.shape[1]).any():
        raise IndexError("tree references a feature index outside the matrix")

    cur = np.zeros(len(X), dtype=np.int64)
    while True:
        at = cur.copy()
        active = feat[at] >= 0
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        nodes = at[idx]
        v = X[idx, feat[nodes]]
        go_left = np.where(np.isnan(v), dleft[nodes], v < thr[nodes])
        cur[idx] = np.where(go_left, left[nodes], right[nodes])
    return weight[cur]


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _softmax(margins: np.ndarray) -> np.ndarray:
    z = margins - margins.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _gradients(margins: np.ndarray, y: np.ndarray, objective: str):
    if objective == BINARY_LOGISTIC:
        p = _sigmoid(margins[:, 0])
        g = (p - y).reshape(-1, 1)
        h = (p * (1.0 - p)).reshape(-1, 1)
        return g, h
    p = _softmax(margins)
    g = p.copy()
    g[np.arange(len(y)), y] -= 1.0
    h = np.maximum(p * (1.0 - p), _SOFTMAX_HESSIAN_FLOOR)
    return g, h


def _sorted_choice(rng: np.random.Generator, pool: np.ndarray, k: int) -> np.ndarray:
    return np.sort(rng.choice(pool, size=k, replace=False))


def _sample_count(rate: float, n: int) -> int:
    return max(1, int(round(rate * n)))


def train(
    X,
    y,
    params: GbdtParams,
    objective: str,
    n_classes: int,
    base_margin=None,
    seed: int = 0,
    base_margin_source: str | None = None,
) -> Ensemble:
    """Fit a boosted ensemble starting from the given base margins.

    Trees never modify the base margins; with num_rounds=0 the returned
    ensemble predicts the base margins exactly.
    """
    X = check_feature_matrix(X)
    y = check_labels(y, n_classes)
    if len(X) == 0:
        raise ValueError("empty training set")
    if len(X) != len(y):
        raise ValueError("X and y row counts differ")
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    if objective == BINARY_LOGISTIC and n_classes != 2:
        raise ValueError("binary_logistic requires exactly 2 classes")
    if seed < 0:
        raise ValueError("seed must be non-negative")

    n, n_features = X.shape
    n_cols = margin_columns(objective, n_classes)
    if base_margin is None:
        margins = np.zeros((n, n_cols))
        source = base_margin_source or CONSTANT_MARGIN
    else:
        margins = check_margin_matrix(base_margin, n, n_cols).copy()
        source = base_margin_source or EXTERNAL_MARGIN

    trees = []
    bag = np.arange(n)
    all_features = np.arange(n_features)
    for r in range(params.num_rounds):
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), r]))
        g, h = _gradients(margins, y, objective)

        if params.subsample < 1.0:
            if r % params.subsample_freq == 0:
                bag = _sorted_choice(rng, np.arange(n), _sample_count(params.subsample, n))
        else:
            bag = np.arange(n)

        per_tree_levels = []
        for _ in range(n_cols):
            if params.colsample_bytree < 1.0:
                tree_feats = _sorted_choice(
                    rng, all_features, _sample_count(params.colsample_bytree, n_features)
                )
            else:
                tree_feats = all_features
            if params.colsample_bylevel < 1.0:
                k = _sample_count(params.colsample_bylevel, len(tree_feats))
                levels = [_sorted_choice(rng, tree_feats, k) for _ in range(params.max_depth)]
            else:
                levels = [tree_feats] * params.max_depth
            per_tree_levels.append(levels)

        round_trees = []
        for k in range(n_cols):
            arena = _grow_tree(X, g[:, k], h[:, k], bag, params, per_tree_levels[k])
            round_trees.append((r, k, arena))
        for _, k, arena in round_trees:
            margins[:, k] += params.learning_rate * _tree_margins(arena, X)
        trees.extend(round_trees)

    constant = tuple(0.0 for _ in range(n_cols)) if source == CONSTANT_MARGIN else ()
    return Ensemble(
        trees=trees,
        n_classes=n_classes,
        objective=objective,
        params=params,
        base_margin_source=source,
        base_margin_constant=constant,
    )


def predict_margin(ensemble: Ensemble, X, base_margin=None) -> np.ndarray:
    """base margins + learning-rate-scaled sum of leaf weights along each path."""
    X = check_feature_matrix(X)
    n = len(X)
    n_cols = ensemble.n_margin_columns
    if base_margin is None:
        if ensemble.base_margin_source == EXTERNAL_MARGIN:
            raise ValueError("ensemble was trained with external base margins; none supplied")
        base = np.tile(np.asarray(ensemble.base_margin_constant, dtype=np.float64), (n, 1))
    else:
        base = check_margin_matrix(base_margin, n, n_cols)

    acc = np.zeros((n, n_cols))
    lr = ensemble.params.learning_rate
    for _, k, arena in ensemble.trees:
        acc[:, k] += lr * _tree_margins(arena, X)
    return base + acc


def predict_proba(margins: np.ndarray, objective: str) -> np.ndarray:
    """Margins to a probability matrix (always n x K, also for binary)."""
    margins = np.asarray(margins, dtype=np.float64)
    if margins.ndim == 1:
        margins = margins.reshape(-1, 1)
    if objective == BINARY_LOGISTIC:
        p = _sigmoid(margins[:, 0])
        return np.column_stack([1.0 - p, p])
    if objective == MULTICLASS_SOFTMAX:
        return _softmax(margins)
    raise ValueError(f"unknown objective {objective!r}")


def training_log_loss(margins: np.ndarray, y: np.ndarray, objective: str) -> float:
    """Mean negative log-likelihood at the given margins (numerically exact)."""
    y = np.asarray(y)
    if objective == BINARY_LOGISTIC:
        m = margins[:, 0]
        return float(np.mean(np.logaddexp(0.0, m) - y * m))
    zmax = margins.max(axis=1)
    lse = zmax + np.log(np.exp(margins - zmax[:, None]).sum(axis=1))
    return float(np.mean(lse - margins[np.arange(len(y)), y]))


def split_gains(ensemble: Ensemble) -> list:
    """Gains of every accepted split, for audit (must all be > 0)."""
    return [nd.gain for _, _, arena in ensemble.trees for nd in arena if not nd.is_leaf]


# -- serialization -----------------------------------------------------------
# Self-describing text format; floats are emitted with repr() so that
# load(save(e)) reproduces predictions bit-exactly.


def serialize_ensemble(ensemble: Ensemble) -> str:
    lines = [
        _FORMAT_HEADER,
        f"objective={ensemble.objective}",
        f"n_classes={ensemble.n_classes}",
        f"base_margin_source={ensemble.base_margin_source}",
        "base_margin_constant=" + ",".join(repr(v) for v in ensemble.base_margin_constant),
        "params=" + ensemble.params.to_json(),
        f"trees={len(ensemble.trees)}",
    ]
    for t, (r, k, arena) in enumerate(ensemble.trees):
        lines.append(f"tree id={t} round={r} class={k} nodes={len(arena)}")
        for i, nd in enumerate(arena):
            lines.append(
                f"node id={i} feature={nd.feature} threshold={repr(nd.threshold)} "
                f"default_left={int(nd.default_left)} left={nd.left} right={nd.right} "
                f"weight={repr(nd.weight)}"
            )
    return "\n".join(lines) + "\n"


def deserialize_ensemble(text: str) -> Ensemble:
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or lines[0] != _FORMAT_HEADER:
        raise ValueError("not a priorboost ensemble (bad or missing header)")

    def kv(line: str, key: str) -> str:
        prefix = key + "="
        if not line.startswith(prefix):
            raise ValueError(f"expected {key!r} line, got {line!r}")
        return line[len(prefix):]

    objective = kv(lines[1], "objective")
    n_classes = int(kv(lines[2], "n_classes"))
    source = kv(lines[3], "base_margin_source")
    const_text = kv(lines[4], "base_margin_constant")
    constant = tuple(float(v) for v in const_text.split(",")) if const_text else ()
    params = GbdtParams.from_json(kv(lines[5], "params"))
    n_trees = int(kv(lines[6], "trees"))

    def fields(line: str, tag: str) -> dict:
        parts = line.split()
        if parts[0] != tag:
            raise ValueError(f"expected {tag!r} record, got {line!r}")
        return dict(p.split("=", 1) for p in parts[1:])

    trees = []
    pos = 7
    for _ in range(n_trees):
        head = fields(lines[pos], "tree")
        pos += 1
        arena = []
        for _ in range(int(head["nodes"])):
            nf = fields(lines[pos], "node")
            pos += 1
            arena.append(
                TreeNode(
                    feature=int(nf["feature"]),
                    threshold=float(nf["threshold"]),
                    default_left=bool(int(nf["default_left"])),
                    left=int(nf["left"]),
                    right=int(nf["right"]),
                    weight=float(nf["weight"]),
                )
            )
        trees.append((int(head["round"]), int(head["class"]), arena))
    return Ensemble(
        trees=trees,
        n_classes=n_classes,
        objective=objective,
        params=params,
        base_margin_source=source,
        base_margin_constant=constant,
    )


def save_ensemble(ensemble: Ensemble, path: str | Path) -> None:
    Path(path).write_text(serialize_ensemble(ensemble), encoding="utf-8")


def load_ensemble(path: str | Path) -> Ensemble:
    return deserialize_ensemble(Path(path).read_text(encoding="utf-8"))
