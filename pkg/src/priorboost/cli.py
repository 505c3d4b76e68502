"""Command-line entry point.

Verbs: schema, split, synth, run, report, shuffle-headers.
Exit codes: 0 success, 1 config/usage error, 2 total run failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import bench, datasets, fusion, synthetic
from .bench import BenchmarkFailed, ConfigError


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are config errors (exit 1)
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="priorboost", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("schema", help="infer and print a dataset schema as JSON")
    p.add_argument("csv_path")
    p.add_argument("--target", required=True)

    p = sub.add_parser("split", help="build the subsample ladder and export a manifest")
    p.add_argument("csv_path")
    p.add_argument("--target", required=True)
    p.add_argument("--sizes", default="10,25,50,100,250")
    p.add_argument("--seeds", default="5")
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--test-size", type=int, default=None)
    p.add_argument("--name", default=None, help="dataset name in the manifest")
    p.add_argument("--out", required=True)

    p = sub.add_parser("synth", help="emit a synthetic dataset CSV plus a score file")
    p.add_argument("--rows", type=int, default=1000)
    p.add_argument("--features", type=int, default=8)
    p.add_argument("--informative", type=int, default=None)
    p.add_argument("--classes", type=int, default=2)
    p.add_argument("--weight-seed", type=int, default=0)
    p.add_argument("--label-noise", type=float, default=0.0)
    p.add_argument("--q", type=float, default=1.0, help="prior quality in [0, 1]")
    p.add_argument("--prior-noise-scale", type=float, default=1.0)
    p.add_argument("--prior-score-scale", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prior-seed", type=int, default=None)
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("run", help="run a benchmark from a config file")
    p.add_argument("--config", required=True)
    p.add_argument(
        "--set", dest="overrides", action="append", default=[],
        metavar="SECTION.KEY=VALUE", help="override any config key",
    )

    p = sub.add_parser("report", help="re-aggregate an existing records.csv")
    p.add_argument("--records", required=True)
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("shuffle-headers", help="copy a CSV with feature header names permuted")
    p.add_argument("csv_path")
    p.add_argument("--target", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    return parser


def _cmd_schema(args) -> int:
    schema = datasets.infer_schema(args.csv_path, args.target)
    print(
        json.dumps(
            {
                "target": schema.target,
                "class_labels": list(schema.class_labels),
                "columns": [{"name": c.name, "kind": c.kind} for c in schema.columns],
            },
            indent=2,
        )
    )
    return 0


def _cmd_split(args) -> int:
    schema = datasets.infer_schema(args.csv_path, args.target)
    ds = datasets.load_csv(args.csv_path, schema)
    notes: list[str] = []
    specs = datasets.make_splits(
        ds,
        bench._parse_sizes(args.sizes),
        bench._parse_seeds(args.seeds),
        args.test_fraction,
        args.test_size,
        notes,
    )
    name = args.name or Path(args.csv_path).stem
    datasets.write_split_manifest(args.out, name, specs)
    for note in notes:
        print(f"note: {note}", file=sys.stderr)
    print(f"wrote {len(specs)} splits to {args.out}")
    return 0


def _cmd_synth(args) -> int:
    spec = synthetic.SyntheticSpec(
        n_rows=args.rows,
        n_features=args.features,
        n_informative=args.informative if args.informative is not None else args.features,
        n_classes=args.classes,
        weight_seed=args.weight_seed,
        label_noise=args.label_noise,
        prior_quality=args.q,
        prior_noise_scale=args.prior_noise_scale,
        prior_score_scale=args.prior_score_scale,
    )
    ds, logits = synthetic.generate(spec, args.seed)
    prior_seed = args.prior_seed if args.prior_seed is not None else args.seed
    prior = synthetic.make_prior(
        logits, args.q, prior_seed,
        noise_scale=args.prior_noise_scale,
        score_scale=args.prior_score_scale,
    )
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    synthetic.write_synthetic_csv(out / "data.csv", ds)
    fusion.write_score_file(out / "scores.csv", prior, ds.schema.class_labels)
    print(f"wrote {out / 'data.csv'} and {out / 'scores.csv'}")
    return 0


def _cmd_run(args) -> int:
    config = bench.load_config(args.config, args.overrides)
    report = bench.run_benchmark(config)
    print(f"report written to {config.out_dir} ({len(report.datasets)} datasets, "
          f"{len(report.sizes)} sizes, methods: {', '.join(report.methods)})")
    return 0


def _cmd_report(args) -> int:
    records = bench.read_records(args.records)
    report = bench.aggregate(records)
    bench.emit_report(report, args.out_dir, records)
    print(f"report written to {args.out_dir}")
    return 0


def _cmd_shuffle_headers(args) -> int:
    schema = datasets.infer_schema(args.csv_path, args.target)
    shuffled = datasets.shuffle_headers(schema, args.seed)
    renames = dict(zip(schema.feature_names, shuffled.feature_names))
    with open(args.csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    new_header = [renames.get(name, name) for name in header]
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(new_header)
        writer.writerows(rows)
    print(f"wrote {args.out}")
    return 0


_COMMANDS = {
    "schema": _cmd_schema,
    "split": _cmd_split,
    "synth": _cmd_synth,
    "run": _cmd_run,
    "report": _cmd_report,
    "shuffle-headers": _cmd_shuffle_headers,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.verb](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except BenchmarkFailed as exc:
        print(f"benchmark failed: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
