"""Command-line interface for the classifier/error-correction harness.

Subcommands:
  gen-data  — generate a synthetic dataset CSV
  train     — k-fold train a classifier on a dataset CSV, save a model JSON
  synth     — synthesize the per-class reference composites to circuit text
  sweep     — run a PST noise sweep from a JSON config file
  report    — derive pst/accuracy/improvement/overhead tables from a sweep
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..classifier import (
    class_reference_points,
    dataset_from_csv,
    dataset_to_csv,
    generate_dataset,
    labels_for_dimensionality,
    train,
)
from ..synthesis import (
    composite_unitary,
    gate_set_for_code,
    greedy_synthesize,
    result_to_text,
)
from .config import ConfigError, load_config
from .metrics import (
    MetricsError,
    accuracy_records_from_sweep,
    emit_results,
    improvement_report,
    overhead_report,
    read_result_csv,
)
from .sweep import SweepError, read_sweep_meta, run_pst_sweep

_GATE_SET_CODE = {"steane": "Steane", "surface": "D3Surface"}


def _cmd_gen_data(args) -> int:
    dataset = generate_dataset(args.dim, seed=args.seed)
    dataset_to_csv(dataset, args.out)
    print(f"wrote {len(dataset.points)} points ({args.dim}-dimensional) to {args.out}")
    return 0


def _cmd_train(args) -> int:
    dataset = dataset_from_csv(args.data, seed=args.seed)
    report = train(dataset, folds=args.folds)
    payload = {
        "dimensionality": dataset.dimensionality,
        "dataset_seed": dataset.seed,
        "folds": args.folds,
        "thetas": list(report.params.thetas),
        "train_accuracy": report.train_accuracy,
        "test_accuracy": report.test_accuracy,
        "fold_accuracies": list(report.fold_accuracies),
    }
    Path(args.out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    print(
        f"trained {1 if dataset.dimensionality == 2 else 2}-qubit classifier: "
        f"test accuracy {report.test_accuracy:.4f} -> {args.out}"
    )
    return 0


def _load_model(path):
    from ..classifier import ClassifierParams

    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    params = ClassifierParams(tuple(float(t) for t in raw["thetas"]))
    dataset = generate_dataset(int(raw["dimensionality"]), seed=int(raw["dataset_seed"]))
    return dataset, params


def _cmd_synth(args) -> int:
    dataset, params = _load_model(args.model)
    code = _GATE_SET_CODE[args.gate_set]
    refs = class_reference_points(dataset)
    sections = []
    for label in labels_for_dimensionality(dataset.dimensionality):
        target = composite_unitary(refs[label], params)
        result = greedy_synthesize(target, gate_set_for_code(code))
        sections.append(f"# class {label}  fidelity {result.fidelity:.6f}")
        sections.append(result_to_text(result).rstrip("\n"))
    Path(args.out).write_text("\n".join(sections) + "\n", encoding="utf-8")
    print(f"synthesized {len(sections) // 2} composites ({args.gate_set} set) -> {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    config = load_config(args.config)
    records = run_pst_sweep(config)
    print(f"sweep complete: {len(records)} records -> {config.output_path}")
    return 0


def _cmd_report(args) -> int:
    records = read_result_csv(args.records)
    if args.kind == "pst":
        rows = records
    else:
        meta_path = Path(str(args.records) + ".meta.json")
        if not meta_path.exists():
            raise MetricsError(
                f"missing sweep metadata {meta_path} (needed for {args.kind} reports)"
            )
        config = read_sweep_meta(meta_path)
        if args.kind == "accuracy":
            rows = accuracy_records_from_sweep(records, config)
        elif args.kind == "improvement":
            rows = improvement_report(accuracy_records_from_sweep(records, config))
        else:  # overhead
            per_class, averages = overhead_report(
                classifiers=(config.classifier,),
                codes=config.codes,
                master_seed=config.master_seed,
                rounds_per_layer=config.rounds_per_layer,
            )
            rows = per_class + averages
    text = emit_results(rows, fmt=args.format, path=args.out)
    if args.out:
        print(f"wrote {args.kind} report -> {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qecclab",
        description="Quantum classifier noise sweeps with stabilizer error correction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate a synthetic dataset CSV")
    p.add_argument("--dim", type=int, choices=(2, 4), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_data)

    p = sub.add_parser("train", help="train a classifier on a dataset CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=0, help="dataset seed (drives fold splits)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("synth", help="synthesize reference composites to circuit text")
    p.add_argument("--model", required=True)
    p.add_argument("--gate-set", choices=sorted(_GATE_SET_CODE), required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("sweep", help="run a PST noise sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("report", help="derive tables from a completed sweep")
    p.add_argument("--records", required=True)
    p.add_argument("--kind", choices=("pst", "accuracy", "improvement", "overhead"),
                   required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, MetricsError, SweepError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
