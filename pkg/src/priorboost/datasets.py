"""CSV ingestion, categorical encoding, and the train/val/test subsample ladder.

A dataset is loaded once, immutably, and every split of it is a pure function
of the file content plus the requested (sizes, seeds, test_fraction), so any
two runs — or two workers — see identical row assignments.
"""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

NUMERIC = "numeric"
CATEGORICAL = "categorical"

#: Nominal size sentinel: use every remaining row, 80/20 train/val.
FULL = "full"

#: Missing cells become NaN; trees route NaN along the learned default direction.
MISSING = float("nan")

MAX_CLASSES = 5

# Stream tags keeping the test draw and the per-(size, seed) draws independent.
_TEST_STREAM = 0
_TRAINVAL_STREAM = 1


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    kind: str  # NUMERIC or CATEGORICAL


@dataclass(frozen=True)
class TableSchema:
    """Feature columns (ordered), the target column name, and the class labels."""

    columns: tuple[ColumnSpec, ...]
    target: str
    class_labels: tuple[str, ...]

    def __post_init__(self):
        if not self.columns:
            raise ValueError("schema needs at least one feature column")
        names = [c.name for c in self.columns]
        if self.target in names:
            raise ValueError(f"target {self.target!r} must not appear among feature columns")
        if len(set(self.class_labels)) != len(self.class_labels):
            raise ValueError("class labels must be unique")
        if not 2 <= len(self.class_labels) <= MAX_CLASSES:
            raise ValueError(
                f"need between 2 and {MAX_CLASSES} classes, got {len(self.class_labels)}"
            )

    @property
    def n_classes(self) -> int:
        return len(self.class_labels)

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)


@dataclass(frozen=True)
class Dataset:
    """Encoded feature matrix plus labels, row identities and the encoding tables."""

    features: np.ndarray  # (n_rows, n_features) float64; categoricals as codes, NaN missing
    labels: np.ndarray  # (n_rows,) class indices
    row_ids: np.ndarray  # (n_rows,) unique ints
    schema: TableSchema
    category_maps: dict[str, dict[str, int]] = field(default_factory=dict)

    def __post_init__(self):
        self.features.setflags(write=False)
        self.labels.setflags(write=False)
        self.row_ids.setflags(write=False)
        if len(self.features) != len(self.labels) or len(self.labels) != len(self.row_ids):
            raise ValueError("features, labels and row_ids must have equal length")
        if self.features.shape[1] != len(self.schema.columns):
            raise ValueError("feature matrix width does not match schema")
        if len(np.unique(self.row_ids)) != len(self.row_ids):
            raise ValueError("row_ids must be unique")
        if self.labels.size and self.labels.max() >= self.schema.n_classes:
            raise ValueError("label index out of range for schema class labels")

    @property
    def n_rows(self) -> int:
        return len(self.features)

    @property
    def n_classes(self) -> int:
        return self.schema.n_classes

    def positions_of(self, row_ids) -> np.ndarray:
        """Positions of the given row ids inside this dataset (error on unknown ids)."""
        index = {int(r): i for i, r in enumerate(self.row_ids)}
        try:
            return np.array([index[int(r)] for r in row_ids], dtype=np.int64)
        except KeyError as exc:
            raise KeyError(f"row id {exc.args[0]} not present in dataset") from None

    def content_key(self) -> int:
        """Stable 63-bit hash of the dataset content; seeds every split draw."""
        h = hashlib.sha256()
        h.update(self.features.tobytes())
        h.update(self.labels.astype(np.int64).tobytes())
        h.update("\x1f".join(self.schema.class_labels).encode("utf-8"))
        return int.from_bytes(h.digest()[:8], "big") >> 1


@dataclass(frozen=True)
class SplitSpec:
    """One (size, seed) draw: disjoint train/val plus the dataset-wide test set."""

    seed: int
    nominal_size: int | str  # int or FULL
    train_ids: np.ndarray
    val_ids: np.ndarray
    test_ids: np.ndarray

    def __post_init__(self):
        for arr in (self.train_ids, self.val_ids, self.test_ids):
            arr.setflags(write=False)
        tr, va, te = map(set, (self.train_ids.tolist(), self.val_ids.tolist(), self.test_ids.tolist()))
        if tr & va or tr & te or va & te:
            raise ValueError("train/val/test must be pairwise disjoint")
        if self.nominal_size != FULL and len(self.train_ids) != len(self.val_ids):
            raise ValueError("nominal-size splits must have |train| == |val|")


def _parses_numeric(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def _read_rows(path: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        rows = [row for row in reader if row]
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return header, rows


def infer_schema(path: str | Path, target_name: str) -> TableSchema:
    """Infer column kinds and class labels from a comma-delimited file.

    A column is numeric iff every non-empty cell parses as a decimal number.
    """
    header, rows = _read_rows(path)
    if target_name not in header:
        raise ValueError(f"{path}: target column {target_name!r} not found in header")
    target_idx = header.index(target_name)

    columns = []
    for j, name in enumerate(header):
        if j == target_idx:
            continue
        cells = [row[j] for row in rows if j < len(row)]
        numeric = all(_parses_numeric(c) for c in cells if c != "")
        columns.append(ColumnSpec(name=name, kind=NUMERIC if numeric else CATEGORICAL))

    values = sorted({row[target_idx] for row in rows if target_idx < len(row)})
    if "" in values:
        raise ValueError(f"{path}: empty target value")
    if len(values) > MAX_CLASSES:
        raise ValueError(f"{path}: too many classes ({len(values)} > {MAX_CLASSES})")
    if len(values) < 2:
        raise ValueError(f"{path}: target has a single value; need at least 2 classes")
    return TableSchema(columns=tuple(columns), target=target_name, class_labels=tuple(values))


def load_csv(path: str | Path, schema: TableSchema) -> Dataset:
    """Load and encode a file against a schema.

    Categorical cells are coded by first appearance over the file; empty cells
    become the missing marker; row ids are 0..n-1 in file order.
    """
    header, rows = _read_rows(path)
    if schema.target not in header:
        raise ValueError(f"{path}: target column {schema.target!r} not found")
    col_idx = {}
    for spec in schema.columns:
        if spec.name not in header:
            raise ValueError(f"{path}: schema column {spec.name!r} not found in header")
        col_idx[spec.name] = header.index(spec.name)
    target_idx = header.index(schema.target)
    label_idx = {label: k for k, label in enumerate(schema.class_labels)}

    n = len(rows)
    width = len(header)
    features = np.empty((n, len(schema.columns)), dtype=np.float64)
    labels = np.empty(n, dtype=np.int64)
    category_maps: dict[str, dict[str, int]] = {
        spec.name: {} for spec in schema.columns if spec.kind == CATEGORICAL
    }

    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"{path}: ragged row {i} has {len(row)} cells, expected {width}")
        raw_label = row[target_idx]
        if raw_label not in label_idx:
            raise ValueError(f"{path}: row {i}: unknown target label {raw_label!r}")
        labels[i] = label_idx[raw_label]
        for j, spec in enumerate(schema.columns):
            cell = row[col_idx[spec.name]]
            if cell == "":
                features[i, j] = MISSING
            elif spec.kind == NUMERIC:
                try:
                    features[i, j] = float(cell)
                except ValueError:
                    raise ValueError(
                        f"{path}: row {i}: unparseable numeric cell {cell!r} in {spec.name!r}"
                    ) from None
            else:
                table = category_maps[spec.name]
                if cell not in table:
                    table[cell] = len(table)
                features[i, j] = table[cell]

    return Dataset(
        features=features,
        labels=labels,
        row_ids=np.arange(n, dtype=np.int64),
        schema=schema,
        category_maps=category_maps,
    )


def decode_column(dataset: Dataset, column: str) -> list[str]:
    """Invert the categorical encoding of one column (missing decodes to '')."""
    j = dataset.schema.feature_names.index(column)
    spec = dataset.schema.columns[j]
    out = []
    if spec.kind == CATEGORICAL:
        inverse = {code: text for text, code in dataset.category_maps[column].items()}
        for v in dataset.features[:, j]:
            out.append("" if math.isnan(v) else inverse[int(v)])
    else:
        for v in dataset.features[:, j]:
            out.append("" if math.isnan(v) else repr(v))
    return out


def _rng(*streams: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(list(streams)))


def draw_test_ids(dataset: Dataset, test_fraction: float, test_size: int | None = None) -> np.ndarray:
    """The dataset-wide test draw shared by every SplitSpec of the dataset."""
    n = dataset.n_rows
    n_test = int(test_size) if test_size is not None else math.ceil(test_fraction * n)
    if not 0 < n_test < n:
        raise ValueError(f"test size {n_test} infeasible for {n} rows")
    rng = _rng(dataset.content_key(), _TEST_STREAM)
    perm = rng.permutation(n)
    return np.sort(dataset.row_ids[perm[:n_test]])


def make_splits(
    dataset: Dataset,
    sizes,
    seeds,
    test_fraction: float = 0.2,
    test_size: int | None = None,
    notes: list[str] | None = None,
) -> list[SplitSpec]:
    """Build the subsample ladder: one shared test draw, then per-(size, seed)
    disjoint train/val draws from the remainder.

    Sizes infeasible for the dataset (2*size > remaining rows) are skipped and
    reported through `notes`, not raised.
    """
    test_ids = draw_test_ids(dataset, test_fraction, test_size)
    test_set = set(test_ids.tolist())
    remainder = np.array(
        sorted(int(r) for r in dataset.row_ids if int(r) not in test_set), dtype=np.int64
    )
    m = len(remainder)
    key = dataset.content_key()

    specs = []
    for size in sizes:
        if size == FULL:
            n_train, n_val = math.floor(0.8 * m), math.floor(0.2 * m)
            if n_train < 1 or n_val < 1:
                _note(notes, f"size=full infeasible: remainder {m} too small")
                continue
        else:
            size = int(size)
            if 2 * size > m:
                _note(notes, f"size={size} infeasible: 2*{size} > {m} remaining rows")
                continue
            n_train = n_val = size
        size_code = 0 if size == FULL else int(size)
        for seed in seeds:
            rng = _rng(key, _TRAINVAL_STREAM, size_code, int(seed))
            perm = rng.permutation(m)
            train = np.sort(remainder[perm[:n_train]])
            val = np.sort(remainder[perm[n_train : n_train + n_val]])
            specs.append(
                SplitSpec(
                    seed=int(seed),
                    nominal_size=size,
                    train_ids=train,
                    val_ids=val,
                    test_ids=test_ids.copy(),
                )
            )
    return specs


def _note(notes: list[str] | None, message: str) -> None:
    if notes is not None:
        notes.append(message)


def shuffle_headers(schema: TableSchema, seed: int) -> TableSchema:
    """Permute feature column *names* uniformly at random; kinds, column order
    and the target stay put."""
    if len(schema.columns) < 2:
        raise ValueError("need at least 2 feature columns to shuffle headers")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(schema.columns))
    names = schema.feature_names
    columns = tuple(
        replace(spec, name=names[perm[i]]) for i, spec in enumerate(schema.columns)
    )
    return TableSchema(columns=columns, target=schema.target, class_labels=schema.class_labels)


def write_split_manifest(path: str | Path, dataset_name: str, specs: list[SplitSpec]) -> None:
    """Audit export: one `dataset,size,seed,role,row_id` line per assigned row."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dataset", "size", "seed", "role", "row_id"])
        for spec in specs:
            size = spec.nominal_size if spec.nominal_size == FULL else int(spec.nominal_size)
            for role, ids in (("train", spec.train_ids), ("val", spec.val_ids), ("test", spec.test_ids)):
                for rid in ids:
                    writer.writerow([dataset_name, size, spec.seed, role, int(rid)])
