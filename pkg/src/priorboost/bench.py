"""Benchmark runner: datasets x sizes x seeds x methods, with resumable,
byte-reproducible record output.

records.csv doubles as the crash journal: finished cells append to it as the
run progresses, a resumed run recomputes only missing (dataset, size, seed,
method) cells, and on completion the file is rewritten in canonical order so
any two complete runs of the same config are byte-identical.
"""

from __future__ import annotations

import concurrent.futures
import configparser
import hashlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import engine, fusion, metrics, search
from .baselines import (
    METHOD_FUSED,
    METHOD_GBDT,
    METHOD_PRIOR,
    METHOD_SELECTION,
    METHOD_STACKING,
    METHOD_TAGS,
    select_best,
    stack_features,
)
from .datasets import FULL, Dataset, SplitSpec, infer_schema, load_csv, make_splits, shuffle_headers
from .fusion import PriorScores, center_scores, prior_margins, read_score_file
from .metrics import AggregateReport, EvalRecord, aggregate
from .synthetic import SyntheticSpec, generate, make_prior

_PLAIN_STREAM = 0
_STACK_STREAM = 1
_SCALE_STREAM = 2

RECORDS_FILE = "records.csv"
SUMMARY_FILE = "summary_by_size.csv"
TABLES_FILE = "tables.md"
NOTES_FILE = "run_notes.txt"
STUDIES_DIR = "studies"

_RECORDS_HEADER = "dataset,size,seed,method,val_auc,test_auc"

DEFAULT_SIZES = (10, 25, 50, 100, 250)
DEFAULT_BUDGET_BASELINE = 130
DEFAULT_BUDGET_STAGE1 = 100
DEFAULT_BUDGET_SCALE = 30


class ConfigError(ValueError):
    """Bad benchmark configuration (CLI exit code 1)."""


class BenchmarkFailed(RuntimeError):
    """Every cell failed (CLI exit code 2)."""


@dataclass(frozen=True)
class DatasetEntry:
    name: str
    path: str | None = None
    target: str | None = None
    scores: str | None = None
    synthetic: SyntheticSpec | None = None
    data_seed: int = 0
    prior_seed: int = 0
    test_size: int | None = None

    def __post_init__(self):
        if not self.name or any(c in self.name for c in ",\n "):
            raise ConfigError(f"bad dataset name {self.name!r}")
        if (self.path is None) == (self.synthetic is None):
            raise ConfigError(f"dataset {self.name}: give exactly one of path= or synthetic=true")
        if self.path is not None and not self.target:
            raise ConfigError(f"dataset {self.name}: target column required")


@dataclass(frozen=True)
class BenchConfig:
    datasets: tuple
    out_dir: str
    sizes: tuple = DEFAULT_SIZES
    seeds: tuple = (0, 1, 2, 3, 4)
    methods: tuple = METHOD_TAGS
    budget_baseline: int = DEFAULT_BUDGET_BASELINE
    budget_stage1: int = DEFAULT_BUDGET_STAGE1
    budget_scale: int = DEFAULT_BUDGET_SCALE
    space: str = search.XGBOOST_STYLE
    center_axis: str = fusion.CENTER_ROW
    test_fraction: float = 0.2
    master_seed: int = 0
    shuffle_headers_seed: int | None = None
    workers: int = 1
    keep_study_logs: bool = True

    def __post_init__(self):
        if not self.datasets:
            raise ConfigError("no datasets configured")
        if min(self.budget_baseline, self.budget_stage1, self.budget_scale) < 1:
            raise ConfigError("budgets must be positive")
        bad = [m for m in self.methods if m not in METHOD_TAGS]
        if bad:
            raise ConfigError(f"unknown methods {bad}; valid: {list(METHOD_TAGS)}")
        if self.space not in search.SPACE_KINDS:
            raise ConfigError(f"unknown space {self.space!r}")
        if not 0 < self.test_fraction < 1:
            raise ConfigError("test_fraction must be in (0, 1)")
        names = [e.name for e in self.datasets]
        if len(set(names)) != len(names):
            raise ConfigError("duplicate dataset names")


def _parse_sizes(text: str) -> tuple:
    out = []
    for token in text.split(","):
        token = token.strip().lower()
        if not token:
            continue
        out.append(FULL if token == FULL else int(token))
    if not out:
        raise ConfigError("empty size ladder")
    return tuple(out)


def _parse_seeds(text: str) -> tuple:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) == 1 and "," not in text:
        return tuple(range(int(parts[0])))
    return tuple(int(p) for p in parts)


def load_config(path: str | Path, overrides=()) -> BenchConfig:
    """Parse the declarative key/value config file, then apply any
    `section.key=value` (or bare `key=value`, meaning [bench]) overrides."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} must look like key=value")
        key, value = item.split("=", 1)
        section, _, option = key.rpartition(".")
        section = section or "bench"
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, option, value)
    if not parser.has_section("bench"):
        raise ConfigError("config needs a [bench] section")
    bench = parser["bench"]

    entries = []
    for section in parser.sections():
        if not section.startswith("dataset:"):
            continue
        name = section.split(":", 1)[1]
        ds = parser[section]
        if ds.getboolean("synthetic", fallback=False):
            spec = SyntheticSpec(
                n_rows=ds.getint("rows", 1000),
                n_features=ds.getint("features", 8),
                n_informative=ds.getint("informative", ds.getint("features", 8)),
                n_classes=ds.getint("classes", 2),
                weight_seed=ds.getint("weight_seed", 0),
                label_noise=ds.getfloat("label_noise", 0.0),
                prior_quality=ds.getfloat("prior_quality", 1.0),
                prior_noise_scale=ds.getfloat("prior_noise_scale", 1.0),
                logit_scale=ds.getfloat("logit_scale", 1.0),
                prior_score_scale=ds.getfloat("prior_score_scale", 1.0),
            )
            entries.append(
                DatasetEntry(
                    name=name,
                    synthetic=spec,
                    data_seed=ds.getint("data_seed", 0),
                    prior_seed=ds.getint("prior_seed", 0),
                    test_size=ds.getint("test_size", fallback=None),
                )
            )
        else:
            entries.append(
                DatasetEntry(
                    name=name,
                    path=ds.get("path"),
                    target=ds.get("target"),
                    scores=ds.get("scores", fallback=None),
                    test_size=ds.getint("test_size", fallback=None),
                )
            )

    try:
        return BenchConfig(
            datasets=tuple(entries),
            out_dir=bench.get("out_dir", "bench_out"),
            sizes=_parse_sizes(bench.get("sizes", "10,25,50,100,250")),
            seeds=_parse_seeds(bench.get("seeds", "5")),
            methods=tuple(
                m.strip() for m in bench.get("methods", ",".join(METHOD_TAGS)).split(",") if m.strip()
            ),
            budget_baseline=bench.getint("budget_baseline", DEFAULT_BUDGET_BASELINE),
            budget_stage1=bench.getint("budget_stage1", DEFAULT_BUDGET_STAGE1),
            budget_scale=bench.getint("budget_scale", DEFAULT_BUDGET_SCALE),
            space=bench.get("space", search.XGBOOST_STYLE),
            center_axis=bench.get("center_axis", fusion.CENTER_ROW),
            test_fraction=bench.getfloat("test_fraction", 0.2),
            master_seed=bench.getint("master_seed", 0),
            shuffle_headers_seed=bench.getint("shuffle_headers_seed", fallback=None),
            workers=bench.getint("workers", 1),
            keep_study_logs=bench.getboolean("keep_study_logs", True),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# -- dataset contexts ---------------------------------------------------------


@dataclass
class _Context:
    entry: DatasetEntry
    dataset: Dataset
    prior: PriorScores | None  # centered
    stacked: Dataset | None
    splits: dict  # (size, seed) -> SplitSpec
    display_schema: object
    notes: list


_PRIOR_METHODS = {METHOD_PRIOR, METHOD_SELECTION, METHOD_STACKING, METHOD_FUSED}


def _build_context(entry: DatasetEntry, config: BenchConfig) -> _Context:
    notes: list[str] = []
    if entry.synthetic is not None:
        dataset, logits = generate(entry.synthetic, entry.data_seed)
        raw = make_prior(
            logits,
            entry.synthetic.prior_quality,
            entry.prior_seed,
            noise_scale=entry.synthetic.prior_noise_scale,
            score_scale=entry.synthetic.prior_score_scale,
        )
    else:
        schema = infer_schema(entry.path, entry.target)
        dataset = load_csv(entry.path, schema)
        raw = None
        if entry.scores:
            raw = read_score_file(entry.scores, schema.class_labels)

    display_schema = dataset.schema
    if config.shuffle_headers_seed is not None:
        display_schema = shuffle_headers(dataset.schema, config.shuffle_headers_seed)

    prior = center_scores(raw, config.center_axis) if raw is not None else None
    if prior is None and set(config.methods) & _PRIOR_METHODS:
        raise ConfigError(
            f"dataset {entry.name}: methods {sorted(set(config.methods) & _PRIOR_METHODS)} "
            "need a score file (scores=) or a synthetic spec"
        )

    stacked = None
    if METHOD_STACKING in config.methods:
        stacked = stack_features(dataset, prior)

    split_list = make_splits(
        dataset, config.sizes, config.seeds, config.test_fraction, entry.test_size, notes
    )
    notes = [f"{entry.name}: {n}" for n in notes]
    splits = {(s.nominal_size, s.seed): s for s in split_list}
    return _Context(
        entry=entry,
        dataset=dataset,
        prior=prior,
        stacked=stacked,
        splits=splits,
        display_schema=display_schema,
        notes=notes,
    )


def _dataset_key(name: str) -> int:
    return int.from_bytes(hashlib.sha256(name.encode("utf-8")).digest()[:4], "big")


def _study_seed(config: BenchConfig, name: str, size, seed: int, stream: int) -> int:
    size_code = 0 if size == FULL else int(size)
    ss = np.random.SeedSequence(
        [config.master_seed, _dataset_key(name), size_code, int(seed), stream]
    )
    return int(ss.generate_state(1)[0])


@dataclass
class _CellResult:
    records: list
    study_logs: dict  # filename -> text


def _objective_for(dataset: Dataset) -> str:
    return engine.BINARY_LOGISTIC if dataset.n_classes == 2 else engine.MULTICLASS_SOFTMAX


def _evaluate_cell(ctx: _Context, split: SplitSpec, methods, config: BenchConfig) -> _CellResult:
    """All requested methods for one (dataset, size, seed) cell."""
    dataset, prior = ctx.dataset, ctx.prior
    name, size, seed = ctx.entry.name, split.nominal_size, split.seed
    objective = _objective_for(dataset)
    test_pos = dataset.positions_of(split.test_ids)
    val_pos = dataset.positions_of(split.val_ids)
    y_test, y_val = dataset.labels[test_pos], dataset.labels[val_pos]

    records: dict[str, EvalRecord] = {}
    study_logs: dict[str, str] = {}

    def log_study(tag: str, study: search.StudyResult):
        study_logs[f"{name}_{size}_{seed}_{tag}.log"] = "\n".join(study.log_lines()) + "\n"

    def record(method, val_auc, test_auc):
        records[method] = EvalRecord(
            dataset=name, size=size, seed=seed, method=method,
            val_auc=float(val_auc), test_auc=float(test_auc),
        )

    needs_plain = {METHOD_GBDT, METHOD_SELECTION, METHOD_FUSED} & set(methods)
    plain_budget = 0
    if {METHOD_GBDT, METHOD_SELECTION} & set(methods):
        plain_budget = config.budget_baseline
    if METHOD_FUSED in methods:
        plain_budget = max(plain_budget, config.budget_stage1)

    plain_study = None
    if needs_plain:
        plain_study = search.tune_gbdt(
            dataset, split, config.space, plain_budget, None,
            _study_seed(config, name, size, seed, _PLAIN_STREAM), objective,
        )
        log_study("plain", plain_study)

    gbdt_val = gbdt_test = None
    if {METHOD_GBDT, METHOD_SELECTION} & set(methods):
        best = plain_study.truncated(config.budget_baseline).best
        params = search.to_engine_params(best.params, config.space)
        train_pos = dataset.positions_of(split.train_ids)
        model = engine.train(
            dataset.features[train_pos], dataset.labels[train_pos],
            params, objective, dataset.n_classes, seed=best.seed,
        )
        gbdt_val = best.val_auc
        gbdt_test = metrics.auc_from_margins(
            engine.predict_margin(model, dataset.features[test_pos]), y_test, objective
        )
        if METHOD_GBDT in methods:
            record(METHOD_GBDT, gbdt_val, gbdt_test)

    prior_val = prior_test = None
    if {METHOD_PRIOR, METHOD_SELECTION} & set(methods):
        prior_val = metrics.auc_from_margins(
            prior_margins(prior, split.val_ids, objective), y_val, objective
        )
        prior_test = metrics.auc_from_margins(
            prior_margins(prior, split.test_ids, objective), y_test, objective
        )
        if METHOD_PRIOR in methods:
            record(METHOD_PRIOR, prior_val, prior_test)

    if METHOD_SELECTION in methods:
        chosen = select_best(gbdt_val, prior_val)
        if chosen == METHOD_GBDT:
            record(METHOD_SELECTION, gbdt_val, gbdt_test)
        else:
            record(METHOD_SELECTION, prior_val, prior_test)

    if METHOD_STACKING in methods:
        stacked = ctx.stacked
        study = search.tune_gbdt(
            stacked, split, config.space, config.budget_baseline, None,
            _study_seed(config, name, size, seed, _STACK_STREAM), objective,
        )
        log_study("stacking", study)
        best = study.best
        params = search.to_engine_params(best.params, config.space)
        train_pos = stacked.positions_of(split.train_ids)
        model = engine.train(
            stacked.features[train_pos], stacked.labels[train_pos],
            params, objective, stacked.n_classes, seed=best.seed,
        )
        s_test_pos = stacked.positions_of(split.test_ids)
        stack_test = metrics.auc_from_margins(
            engine.predict_margin(model, stacked.features[s_test_pos]), y_test, objective
        )
        record(METHOD_STACKING, best.val_auc, stack_test)

    if METHOD_FUSED in methods:
        stage1_best = plain_study.truncated(config.budget_stage1).best
        stage1_params = search.to_engine_params(stage1_best.params, config.space)
        s, scale_study = search.tune_scale(
            dataset, split, prior, stage1_params, config.budget_scale,
            _study_seed(config, name, size, seed, _SCALE_STREAM), objective,
            train_seed=stage1_best.seed,
        )
        log_study("scale", scale_study)
        model = fusion.train_fused(
            dataset, split, prior, s, stage1_params, stage1_best.seed,
            objective, config.center_axis,
        )
        fused_test = metrics.auc_from_margins(
            fusion.predict_fused_margin(model, dataset, split.test_ids, prior), y_test, objective
        )
        record(METHOD_FUSED, scale_study.best.val_auc, fused_test)

    ordered = [records[m] for m in METHOD_TAGS if m in records]
    return _CellResult(records=ordered, study_logs=study_logs)


# -- journal ------------------------------------------------------------------


def _size_str(size) -> str:
    return FULL if size == FULL else str(int(size))


def _size_from_str(text: str):
    return FULL if text == FULL else int(text)


def _record_line(rec: EvalRecord) -> str:
    return (
        f"{rec.dataset},{_size_str(rec.size)},{rec.seed},{rec.method},"
        f"{repr(rec.val_auc)},{repr(rec.test_auc)}"
    )


def read_records(path: str | Path) -> list:
    out = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != _RECORDS_HEADER:
            raise ValueError(f"{path}: unexpected records header {header!r}")
        for ln in fh:
            ln = ln.strip()
            if not ln:
                continue
            dataset, size, seed, method, val_auc, test_auc = ln.split(",")
            out.append(
                EvalRecord(
                    dataset=dataset, size=_size_from_str(size), seed=int(seed),
                    method=method, val_auc=float(val_auc), test_auc=float(test_auc),
                )
            )
    return out


def _canonical(records) -> list:
    method_order = {m: i for i, m in enumerate(METHOD_TAGS)}
    return sorted(
        records,
        key=lambda r: (r.dataset, metrics._size_key(r.size), r.seed, method_order[r.method]),
    )


def _write_records(path: Path, records) -> None:
    lines = [_RECORDS_HEADER] + [_record_line(r) for r in _canonical(records)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


# -- the run ------------------------------------------------------------------


_WORKER_CONTEXTS: dict = {}


def _worker_cell(config: BenchConfig, entry_index: int, size, seed: int, methods: tuple):
    """Top-level task so process pools can pickle it; contexts are cached per
    process and rebuilt deterministically from the config."""
    key = config.datasets[entry_index].name
    ctx = _WORKER_CONTEXTS.get(key)
    if ctx is None:
        ctx = _build_context(config.datasets[entry_index], config)
        _WORKER_CONTEXTS[key] = ctx
    split = ctx.splits[(size, seed)]
    return _evaluate_cell(ctx, split, methods, config)


def run_benchmark(config: BenchConfig) -> AggregateReport:
    """Run the full grid, resuming from any existing records.csv journal."""
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records_path = out_dir / RECORDS_FILE

    contexts = {e.name: _build_context(e, config) for e in config.datasets}
    notes: list[str] = []
    for ctx in contexts.values():
        notes.extend(ctx.notes)

    done: dict = {}
    if records_path.exists():
        for rec in read_records(records_path):
            done[(rec.dataset, rec.size, rec.seed, rec.method)] = rec

    # Deterministic cell order: config dataset order, then size ladder, then seed.
    cells = []
    for i, entry in enumerate(config.datasets):
        ctx = contexts[entry.name]
        for size in config.sizes:
            for seed in config.seeds:
                if (size, seed) not in ctx.splits:
                    continue  # infeasible size, already noted
                missing = tuple(
                    m for m in config.methods if (entry.name, size, seed, m) not in done
                )
                if missing:
                    cells.append((i, entry.name, size, seed, missing))

    journal = open(records_path, "a", encoding="utf-8", newline="")
    if records_path.stat().st_size == 0:
        journal.write(_RECORDS_HEADER + "\n")
        journal.flush()

    failures: list[str] = []
    new_records: list[EvalRecord] = []

    def consume(name: str, size, seed, result: _CellResult):
        for rec in result.records:
            new_records.append(rec)
            journal.write(_record_line(rec) + "\n")
        journal.flush()
        if config.keep_study_logs:
            studies = out_dir / STUDIES_DIR
            studies.mkdir(exist_ok=True)
            for fname, text in result.study_logs.items():
                (studies / fname).write_text(text, encoding="utf-8")

    try:
        if config.workers > 1 and len(cells) > 1:
            with concurrent.futures.ProcessPoolExecutor(max_workers=config.workers) as pool:
                futures = {
                    pool.submit(_worker_cell, config, i, size, seed, methods): (name, size, seed)
                    for (i, name, size, seed, methods) in cells
                }
                for fut in concurrent.futures.as_completed(futures):
                    name, size, seed = futures[fut]
                    try:
                        consume(name, size, seed, fut.result())
                    except (ValueError, ArithmeticError, RuntimeError, KeyError) as exc:
                        failures.append(f"cell ({name}, {size}, {seed}) failed: {exc}")
        else:
            for i, name, size, seed, methods in cells:
                ctx = contexts[name]
                split = ctx.splits[(size, seed)]
                try:
                    consume(name, size, seed, _evaluate_cell(ctx, split, methods, config))
                except (ValueError, ArithmeticError, RuntimeError, KeyError) as exc:
                    failures.append(f"cell ({name}, {size}, {seed}) failed: {exc}")
    finally:
        journal.close()

    all_records = list(done.values()) + new_records
    if not all_records:
        raise BenchmarkFailed(
            "every cell failed:\n" + "\n".join(failures) if failures else "no runnable cells"
        )
    # Drop cells that ended up partial (a method failed): aggregation requires
    # a consistent method set per (dataset, size, seed) group.
    by_cell: dict = {}
    for rec in all_records:
        by_cell.setdefault((rec.dataset, rec.size, rec.seed), []).append(rec)
    kept = []
    for key, recs in by_cell.items():
        if {r.method for r in recs} == set(config.methods):
            kept.extend(recs)
        else:
            failures.append(f"cell {key} incomplete ({sorted(r.method for r in recs)}); dropped")
    if not kept:
        raise BenchmarkFailed("every cell failed:\n" + "\n".join(failures))

    _write_records(records_path, kept)

    report = aggregate(kept)
    report.notes = sorted(notes) + sorted(failures)
    report.meta = {
        "budget_baseline": config.budget_baseline,
        "budget_stage1": config.budget_stage1,
        "budget_scale": config.budget_scale,
        "fused_total": config.budget_stage1 + config.budget_scale,
        "budget_check": (
            "ok"
            if config.budget_stage1 + config.budget_scale == config.budget_baseline
            else f"mismatch: {config.budget_stage1}+{config.budget_scale} != {config.budget_baseline}"
        ),
        "space": config.space,
        "methods": list(config.methods),
        "split_shapes": {
            (ctx.entry.name, size): (
                len(ctx.splits[(size, seed)].train_ids),
                len(ctx.splits[(size, seed)].val_ids),
                len(ctx.splits[(size, seed)].test_ids),
            )
            for ctx in contexts.values()
            for (size, seed) in ctx.splits
        },
    }
    emit_report(report, out_dir, kept)
    return report


# -- report emission ----------------------------------------------------------


def _fmt(v: float) -> str:
    return f"{v:.4f}"


def emit_report(report: AggregateReport, out_dir: str | Path, records) -> None:
    """Write records.csv, summary_by_size.csv and the per-dataset tables.md."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_records(out / RECORDS_FILE, records)

    lines = ["size,method,mean_auc,mean_rank,mean_z,n_datasets"]
    for size in report.sizes:
        for m in report.methods:
            s = report.summary[(size, m)]
            lines.append(
                f"{_size_str(size)},{m},{repr(s['mean_auc'])},{repr(s['mean_rank'])},"
                f"{repr(s['mean_z'])},{s['n_datasets']}"
            )
    (out / SUMMARY_FILE).write_text("\n".join(lines) + "\n", encoding="utf-8")

    shapes = report.meta.get("split_shapes", {})
    md = ["# Benchmark report", ""]
    for dataset in report.datasets:
        md.append(f"## {dataset}")
        md.append("")
        header = ["Train size", "Val size", "Test size"] + [f"{m} ± err" for m in report.methods]
        md.append("| " + " | ".join(header) + " |")
        md.append("|" + "---|" * len(header))
        sizes = [s for s in report.sizes if (dataset, s) in report.row_ranks]
        for size in sizes:
            means = {m: report.per_dataset[(dataset, size, m)] for m in report.methods}
            best_auc = max(v[0] for v in means.values())
            tr, va, te = shapes.get((dataset, size), (_size_str(size), "", ""))
            row = [str(tr), str(va), str(te)]
            for m in report.methods:
                mean, err, _n = means[m]
                cell = f"{_fmt(mean)} ± {_fmt(err)}"
                if mean == best_auc:
                    cell = f"**{cell}**"
                row.append(cell)
            md.append("| " + " | ".join(row) + " |")
        md.append("")

    md.append("## Summary by size")
    md.append("")
    header = ["Size", "Method", "Mean AUC", "Mean rank", "Mean z", "Datasets"]
    md.append("| " + " | ".join(header) + " |")
    md.append("|" + "---|" * len(header))
    for size in report.sizes:
        for m in report.methods:
            s = report.summary[(size, m)]
            md.append(
                f"| {_size_str(size)} | {m} | {_fmt(s['mean_auc'])} | {s['mean_rank']:.2f} "
                f"| {s['mean_z']:+.3f} | {s['n_datasets']} |"
            )
    md.append("")
    if report.meta:
        md.append(
            f"Budgets: baseline={report.meta.get('budget_baseline')}, "
            f"fused={report.meta.get('budget_stage1')}+{report.meta.get('budget_scale')} "
            f"(check: {report.meta.get('budget_check')})"
        )
        md.append("")
    (out / TABLES_FILE).write_text("\n".join(md) + "\n", encoding="utf-8")

    if report.notes:
        (out / NOTES_FILE).write_text("\n".join(report.notes) + "\n", encoding="utf-8")
