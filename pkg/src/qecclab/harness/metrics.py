"""Accuracy-impact modelling, improvement and overhead reports, result files.

The noise-impact model predicts noisy accuracy from per-class success
probabilities: each class's success probability drops by Δp_ci between the
clean and noisy runs of its reference point, and the predicted accuracy is
A′ = A − Δp with Δp the mean per-class decrease.  A is the trained
classifier's clean test accuracy, shared by every code: Δp is a difference
of success probabilities of the same synthesized circuit, so discrete-gate
synthesis loss cancels and the report isolates what noise (and error
correction) does.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from ..circuits import metrics as circuit_metrics
from ..classifier import class_reference_points, labels_for_dimensionality
from ..noise import ErrorMode, NoiseModel
from .config import ExperimentConfig
from .sweep import (
    ResultRecord,
    SweepError,
    _bare_executable,
    _protected_plan,
    cell_seed,
    clean_success_probability,
    estimate_pst,
    synthesized_composite,
    trained_model,
)

__all__ = [
    "AccuracyRecord",
    "ImprovementRecord",
    "MetricsError",
    "NoiseImpactModel",
    "OverheadRecord",
    "accuracy_records_from_sweep",
    "accuracy_under_noise",
    "emit_results",
    "estimate_noisy_accuracy",
    "improvement_report",
    "noise_impact_model",
    "overhead_report",
    "read_result_csv",
]


class MetricsError(ValueError):
    pass


@dataclass(frozen=True)
class NoiseImpactModel:
    """Per-class success-probability drop and the accuracy it predicts."""

    n: int                       # class count
    A: float                     # clean accuracy, fraction
    gamma: float                 # physical noise level (alias of p)
    p_ci: tuple                  # clean per-class success probabilities
    p_prime_ci: tuple            # noisy per-class success probabilities

    def __post_init__(self) -> None:
        if self.n <= 0:
            raise MetricsError("class count must be positive")
        if len(self.p_ci) != self.n or len(self.p_prime_ci) != self.n:
            raise MetricsError("per-class probabilities must match the class count")
        for v in (self.A, *self.p_ci, *self.p_prime_ci):
            if not 0.0 <= v <= 1.0:
                raise MetricsError(f"probability out of range: {v}")

    @property
    def delta_p_ci(self) -> tuple:
        return tuple(c - n for c, n in zip(self.p_ci, self.p_prime_ci))

    @property
    def delta_p(self) -> float:
        return sum(self.delta_p_ci) / self.n

    @property
    def a_prime(self) -> float:
        return self.A - self.delta_p


def accuracy_under_noise(model: NoiseImpactModel) -> float:
    """Predicted noisy accuracy A′ = A − Δp (exact arithmetic)."""
    return model.A - model.delta_p


@dataclass(frozen=True)
class AccuracyRecord:
    """Predicted accuracy (percent) for one sweep cell group."""

    classifier: int
    code: str
    mode: str
    p: float
    accuracy: float  # percent


@dataclass(frozen=True)
class ImprovementRecord:
    """Table row: average accuracy over the grid and improvement over None."""

    classifier: int
    mode: str
    code: str
    aa: float  # average accuracy over the noise grid, percent
    ai: float  # relative improvement over the None baseline, percent


@dataclass(frozen=True)
class OverheadRecord:
    """Resource metrics of one executable (bare or protected) circuit."""

    classifier: int
    class_label: str
    code: str
    qubits: int
    gate_count: int
    depth: int


def noise_impact_model(
    classifier: int,
    code: str,
    mode: str,
    p: float,
    config: ExperimentConfig,
    noisy_pst: dict | None = None,
) -> NoiseImpactModel:
    """Build the impact model for one (code, mode, p) cell group.

    Clean per-class probabilities are exact (noiseless synthesized-circuit
    law); noisy ones come from `noisy_pst` (label -> pst, e.g. parsed from a
    sweep CSV) or are estimated fresh with the sweep's own cell seeds.
    """
    dim = 2 if classifier == 1 else 4
    dataset, report = trained_model(dim, config.master_seed)
    refs = class_reference_points(dataset)
    labels = labels_for_dimensionality(dim)
    p_ci = []
    p_prime_ci = []
    for label in labels:
        point = refs[label]
        clean = clean_success_probability(point, report.params, code)
        if noisy_pst is not None:
            if label not in noisy_pst:
                raise MetricsError(f"missing reference point result for class {label}")
            noisy = float(noisy_pst[label])
        else:
            seed = cell_seed(config.master_seed, dim, label, code, mode, f"{p:.6g}")
            noisy = estimate_pst(
                point, report.params, code, mode, p, config.shots, seed,
                config.rounds_per_layer,
            ).pst
        p_ci.append(clean)
        # Monte Carlo noise can leave the estimate a hair above the exact
        # clean probability; the decrease is physically non-negative
        p_prime_ci.append(min(noisy, clean))
    return NoiseImpactModel(
        n=len(labels),
        A=report.test_accuracy,
        gamma=p,
        p_ci=tuple(p_ci),
        p_prime_ci=tuple(p_prime_ci),
    )


def _direct_accuracy(
    classifier: int, code: str, mode: str, p: float, config: ExperimentConfig,
    sample_size: int = 128, shots_per_point: int = 64,
) -> float:
    """Shot-by-shot classification of a test subsample (cross-check), percent.

    Each sampled point's noisy outcome frequencies are tallied (the per-label
    pst of the same fault stream is exactly the frequency of that label's
    outcome) and the point is classified by the most frequent label.
    """
    dim = 2 if classifier == 1 else 4
    dataset, report = trained_model(dim, config.master_seed)
    rng = np.random.default_rng(cell_seed(config.master_seed, "direct", dim, code, mode, f"{p:.6g}"))
    idx = rng.choice(len(dataset.points), size=min(sample_size, len(dataset.points)), replace=False)
    labels = labels_for_dimensionality(dim)
    correct = 0
    for i in idx:
        point = dataset.points[int(i)]
        seed = int(rng.integers(0, 2**63 - 1))
        votes: dict[str, float] = {}
        for label in labels:
            shifted = type(point)(point.features, label)
            rec = estimate_pst(
                shifted, report.params, code, mode, p, shots_per_point, seed,
                config.rounds_per_layer,
            )
            votes[label] = rec.pst
        predicted = max(sorted(votes), key=lambda lb: votes[lb])
        if predicted == point.label:
            correct += 1
    return 100.0 * correct / len(idx)


def estimate_noisy_accuracy(
    classifier: int,
    code: str,
    mode: str,
    p: float,
    config: ExperimentConfig,
    method: str = "reference",
    noisy_pst: dict | None = None,
) -> float:
    """Noisy accuracy (percent) for one cell group.

    `reference` (primary): per-class Δp from the class reference points fed
    through the A′ = A − Δp model.  `direct` (cross-check): classify a
    128-point subsample shot-by-shot and count correct predictions.
    """
    if method == "reference":
        model = noise_impact_model(classifier, code, mode, p, config, noisy_pst)
        return 100.0 * accuracy_under_noise(model)
    if method == "direct":
        return _direct_accuracy(classifier, code, mode, p, config)
    raise MetricsError(f"unknown accuracy method {method!r}")


def accuracy_records_from_sweep(
    records: list, config: ExperimentConfig
) -> list[AccuracyRecord]:
    """Predicted accuracy per (code, mode, p) from a completed PST sweep."""
    by_cell: dict[tuple, dict] = {}
    for rec in records:
        by_cell.setdefault((rec.code, rec.mode, rec.p), {})[rec.class_label] = rec.pst
    out = []
    for code in config.codes:
        for mode in config.modes:
            for p in config.noise_grid:
                cell = by_cell.get((code, mode, p))
                if cell is None:
                    raise MetricsError(f"sweep records missing cell {(code, mode, p)}")
                acc = estimate_noisy_accuracy(
                    config.classifier, code, mode, p, config, noisy_pst=cell
                )
                out.append(AccuracyRecord(config.classifier, code, mode, p, acc))
    return out


def improvement_report(accuracy_records: list) -> list[ImprovementRecord]:
    """Average accuracy over the grid and relative improvement over None.

    AI = (AA_code − AA_none) / AA_none × 100, rounded to two decimals; the
    None baseline row reports AI = 0.  Raises if a mode lacks its baseline.
    """
    mode_rank = {"D": 0, "BP": 1, "BPD": 2}
    code_rank = {"None": 0, "Steane": 1, "D3Surface": 2, "D5Surface": 3}
    groups: dict[tuple, list] = {}
    for rec in accuracy_records:
        groups.setdefault((rec.classifier, rec.mode, rec.code), []).append(rec.accuracy)
    out = []
    for (classifier, mode, code), accs in sorted(
        groups.items(),
        key=lambda kv: (kv[0][0], mode_rank.get(kv[0][1], 9), code_rank.get(kv[0][2], 9)),
    ):
        baseline = groups.get((classifier, mode, "None"))
        if baseline is None:
            raise MetricsError(f"no None baseline for classifier {classifier}, mode {mode}")
        aa = float(np.mean(accs))
        aa_none = float(np.mean(baseline))
        ai = 0.0 if code == "None" else round((aa - aa_none) / aa_none * 100.0, 2)
        out.append(ImprovementRecord(classifier, mode, code, aa, ai))
    return out


def overhead_report(
    classifiers=(1, 2),
    codes=("None", "Steane", "D3Surface", "D5Surface"),
    master_seed: int = 0,
    rounds_per_layer: int = 1,
) -> tuple[list[OverheadRecord], list[OverheadRecord]]:
    """Resource table per (classifier, class, code), plus per-code averages.

    None rows report the bare synthesized executable (circuit + readout).
    Code rows report the fully assembled protected circuit for one common
    logical circuit per class — the composite synthesized over the gate set
    every code supports — so the comparison isolates each code's overhead
    instead of mixing in gate-set-dependent synthesis length.  Averages pool
    the per-class rows of each (classifier, code) pair; their class label is
    'avg' and fractional means round half-up to the nearest integer.
    """
    rows: list[OverheadRecord] = []
    for classifier in classifiers:
        dim = 2 if classifier == 1 else 4
        dataset, report = trained_model(dim, master_seed)
        refs = class_reference_points(dataset)
        for label in labels_for_dimensionality(dim):
            point = refs[label]
            # the surface set is the intersection of every code's gate set
            common = synthesized_composite(point, report.params, "D3Surface")
            for code in codes:
                if code == "None":
                    m = circuit_metrics(
                        _bare_executable(synthesized_composite(point, report.params, code))
                    )
                else:
                    m = circuit_metrics(_protected_plan(common, code, rounds_per_layer).total)
                rows.append(
                    OverheadRecord(classifier, label, code, m.qubits, m.gate_count, m.depth)
                )
    averages: list[OverheadRecord] = []
    for classifier in classifiers:
        for code in codes:
            group = [r for r in rows if r.classifier == classifier and r.code == code]
            averages.append(
                OverheadRecord(
                    classifier,
                    "avg",
                    code,
                    int(np.floor(np.mean([r.qubits for r in group]) + 0.5)),
                    int(np.floor(np.mean([r.gate_count for r in group]) + 0.5)),
                    int(np.floor(np.mean([r.depth for r in group]) + 0.5)),
                )
            )
    return rows, averages


# -- result files --------------------------------------------------------

_PERSISTED_FIELDS = {
    ResultRecord: ("classifier", "class_label", "code", "mode", "p", "shots", "pst"),
}


def _field_names(record) -> tuple:
    special = _PERSISTED_FIELDS.get(type(record))
    if special is not None:
        return special
    return tuple(f.name for f in fields(record))


def _format_value(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def emit_results(records: list, fmt: str = "csv", path=None) -> str:
    """Serialize records (CSV or JSON) with a stable column order.

    Columns follow the record dataclass's field order; floats are written
    with six significant digits in both formats so the two files mirror each
    other exactly.  An empty record list yields a header-only CSV (or empty
    JSON array).  Returns the text; writes it to `path` when given.
    """
    if fmt not in ("csv", "json"):
        raise MetricsError(f"unknown output format {fmt!r}")
    if records:
        names = _field_names(records[0])
        for rec in records:
            if _field_names(rec) != names:
                raise MetricsError("records must share one schema")
    else:
        names = _field_names(ResultRecord(1, "M", "None", "D", 1e-4, 100, 0.0))
    if fmt == "csv":
        lines = [",".join(names)]
        for rec in records:
            lines.append(",".join(_format_value(getattr(rec, n)) for n in names))
        text = "\n".join(lines) + "\n"
    else:
        payload = []
        for rec in records:
            row = {}
            for n in names:
                v = getattr(rec, n)
                row[n] = float(_format_value(v)) if isinstance(v, float) else v
            payload.append(row)
        text = json.dumps(payload, indent=2) + "\n"
    if path is not None:
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise MetricsError(f"cannot write results to {path}: {exc}") from exc
    return text


def read_result_csv(path) -> list[ResultRecord]:
    """Parse a PST result CSV back into records (round-trip of emit_results)."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].split(",") != list(_PERSISTED_FIELDS[ResultRecord]):
        raise MetricsError(f"{path} is not a PST result file")
    out = []
    for line in lines[1:]:
        c, label, code, mode, p, shots, pst = line.split(",")
        out.append(
            ResultRecord(int(c), label, code, mode, float(p), int(shots), float(pst))
        )
    return out
