"""Harness tests: config, sweep determinism/resume, metrics, reports, CLI."""
import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

from qecclab.classifier import class_reference_points
from qecclab.harness import (
    AccuracyRecord,
    ConfigError,
    ExperimentConfig,
    ImprovementRecord,
    MetricsError,
    NoiseImpactModel,
    ResultRecord,
    accuracy_records_from_sweep,
    accuracy_under_noise,
    cell_seed,
    clean_success_probability,
    emit_results,
    estimate_noisy_accuracy,
    estimate_pst,
    improvement_report,
    load_config,
    noise_impact_model,
    overhead_report,
    read_result_csv,
    read_sweep_meta,
    run_pst_sweep,
    sweep_cells,
    trained_model,
)
from qecclab.harness.cli import main as cli_main
from qecclab.harness.sweep import format_record, parse_record_line

MASTER = 20260801


@pytest.fixture(scope="module")
def model_1q():
    dataset, report = trained_model(2, MASTER)
    return dataset, report, class_reference_points(dataset)


# -- configuration ---------------------------------------------------------

def test_config_defaults_valid():
    cfg = ExperimentConfig()
    assert cfg.noise_grid == (1e-4, 3e-4, 1e-3, 3e-3, 1e-2)
    assert cfg.shots == 2000


@pytest.mark.parametrize(
    "kwargs",
    [
        {"classifier": 3},
        {"codes": ("None", "Shor")},
        {"modes": ("D", "XY")},
        {"noise_grid": (1e-4, 2e-2)},  # above the correction-threshold cap
        {"noise_grid": (0.0,)},
        {"shots": 99},
        {"rounds_per_layer": 0},
    ],
)
def test_config_rejects_invalid(kwargs):
    with pytest.raises(ConfigError):
        ExperimentConfig(**kwargs)


def test_load_config_roundtrip(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"classifier": 2, "shots": 500, "noise_grid": [1e-3]}))
    cfg = load_config(path)
    assert cfg.classifier == 2 and cfg.shots == 500 and cfg.noise_grid == (1e-3,)
    path.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(ConfigError):
        load_config(path)


# -- records and seeding ---------------------------------------------------

def test_record_line_roundtrip():
    rec = ResultRecord(1, "M", "D3Surface", "BPD", 3e-3, 2000, 0.9815)
    assert parse_record_line(format_record(rec)) == rec


def test_pst_out_of_range_rejected():
    with pytest.raises(Exception):
        ResultRecord(1, "M", "None", "D", 1e-3, 100, 1.5)


def test_cell_seed_deterministic_and_distinct():
    a = cell_seed(7, 2, "M", "None", "D", "0.001")
    assert a == cell_seed(7, 2, "M", "None", "D", "0.001")
    assert a != cell_seed(7, 2, "M", "None", "D", "0.003")
    assert a != cell_seed(8, 2, "M", "None", "D", "0.001")


def test_sweep_cells_cardinality():
    cfg = ExperimentConfig(classifier=1)
    # 2 labels x 4 codes x 3 modes x 5 p-values
    assert len(sweep_cells(cfg)) == 120
    empty = ExperimentConfig(classifier=1, codes=())
    assert sweep_cells(empty) == []


# -- estimate_pst ----------------------------------------------------------

def test_estimate_pst_identical_seeds(model_1q):
    _, report, refs = model_1q
    point = refs["M"]
    a = estimate_pst(point, report.params, "Steane", "BPD", 3e-3, 300, seed=17)
    b = estimate_pst(point, report.params, "Steane", "BPD", 3e-3, 300, seed=17)
    assert a.pst == b.pst


def test_estimate_pst_zero_noise_limit(model_1q):
    _, report, refs = model_1q
    point = refs["C"]
    clean = clean_success_probability(point, report.params, "None")
    rec = estimate_pst(point, report.params, "None", "D", 1e-12, 4000, seed=5)
    sigma = math.sqrt(clean * (1 - clean) / 4000)
    assert abs(rec.pst - clean) <= 4 * sigma + 1e-9


def test_estimate_pst_noise_hurts_bare(model_1q):
    _, report, refs = model_1q
    point = refs["M"]
    lo = estimate_pst(point, report.params, "None", "BP", 1e-4, 10_000, seed=3)
    hi = estimate_pst(point, report.params, "None", "BP", 1e-2, 10_000, seed=4)
    sigma = math.sqrt(0.25 / 10_000)
    assert hi.pst < lo.pst - 3 * sigma


def test_protected_beats_bare_at_high_noise(model_1q):
    _, report, refs = model_1q
    point = refs["M"]
    bare = estimate_pst(point, report.params, "None", "BPD", 1e-2, 4000, seed=9)
    prot = estimate_pst(point, report.params, "D5Surface", "BPD", 1e-2, 4000, seed=9)
    assert prot.pst > bare.pst


# -- sweep determinism, resume, workers -------------------------------------

def _small_config(tmp_path, name="sweep.csv", **overrides):
    kwargs = dict(
        classifier=1,
        codes=("None", "Steane"),
        modes=("D",),
        noise_grid=(1e-3, 1e-2),
        shots=200,
        master_seed=MASTER,
        output_path=str(tmp_path / name),
    )
    kwargs.update(overrides)
    return ExperimentConfig(**kwargs)


def test_sweep_rerun_and_resume_byte_identical(tmp_path):
    cfg = _small_config(tmp_path, "a.csv")
    run_pst_sweep(cfg)
    reference = Path(cfg.output_path).read_bytes()

    # rerun from scratch
    cfg2 = _small_config(tmp_path, "b.csv")
    run_pst_sweep(cfg2)
    assert Path(cfg2.output_path).read_bytes() == reference

    # interrupt after 3 cells, then resume
    cfg3 = _small_config(tmp_path, "c.csv")
    lines = reference.decode().splitlines(keepends=True)
    Path(cfg3.output_path).write_text("".join(lines[:4]))
    run_pst_sweep(cfg3)
    assert Path(cfg3.output_path).read_bytes() == reference

    # completed sweeps are reused, not recomputed
    records = run_pst_sweep(cfg3)
    assert Path(cfg3.output_path).read_bytes() == reference
    assert len(records) == len(sweep_cells(cfg))


def test_sweep_worker_count_invariance(tmp_path):
    cfg = _small_config(tmp_path, "w1.csv")
    run_pst_sweep(cfg)
    old = os.environ.get("QECCLAB_WORKERS")
    os.environ["QECCLAB_WORKERS"] = "2"
    try:
        cfg2 = _small_config(tmp_path, "w2.csv")
        run_pst_sweep(cfg2)
    finally:
        if old is None:
            del os.environ["QECCLAB_WORKERS"]
        else:
            os.environ["QECCLAB_WORKERS"] = old
    assert Path(cfg.output_path).read_bytes() == Path(cfg2.output_path).read_bytes()


def test_sweep_meta_companion(tmp_path):
    cfg = _small_config(tmp_path, "m.csv")
    run_pst_sweep(cfg)
    meta = read_sweep_meta(str(tmp_path / "m.csv.meta.json"))
    assert meta == cfg


# -- noise-impact model ------------------------------------------------------

def test_accuracy_under_noise_exact():
    model = NoiseImpactModel(
        n=2, A=0.9133, gamma=1e-3, p_ci=(0.99, 0.98), p_prime_ci=(0.94, 0.93)
    )
    assert accuracy_under_noise(model) == 0.9133 - 0.05
    assert accuracy_under_noise(model) + model.delta_p == model.A


def test_accuracy_under_noise_mean_of_classes():
    model = NoiseImpactModel(
        n=2, A=0.9, gamma=1e-3, p_ci=(1.0, 1.0), p_prime_ci=(0.98, 0.94)
    )
    assert math.isclose(accuracy_under_noise(model), 0.9 - 0.04)


def test_noise_impact_model_validation():
    with pytest.raises(MetricsError):
        NoiseImpactModel(n=0, A=0.9, gamma=0.0, p_ci=(), p_prime_ci=())
    with pytest.raises(MetricsError):
        NoiseImpactModel(n=1, A=1.2, gamma=0.0, p_ci=(1.0,), p_prime_ci=(1.0,))
    with pytest.raises(MetricsError):
        NoiseImpactModel(n=2, A=0.9, gamma=0.0, p_ci=(1.0,), p_prime_ci=(1.0,))


def test_noise_impact_model_from_sweep_records(model_1q):
    cfg = ExperimentConfig(classifier=1, master_seed=MASTER, shots=200)
    model = noise_impact_model(
        1, "None", "D", 1e-3, cfg, noisy_pst={"M": 0.97, "C": 0.95}
    )
    assert model.n == 2 and model.gamma == 1e-3
    assert all(0.0 <= d for d in model.delta_p_ci)
    with pytest.raises(MetricsError):
        noise_impact_model(1, "None", "D", 1e-3, cfg, noisy_pst={"M": 0.97})


def test_reference_vs_direct_accuracy_agree(model_1q):
    cfg = ExperimentConfig(classifier=1, master_seed=MASTER, shots=2000)
    ref = estimate_noisy_accuracy(1, "None", "D", 1e-3, cfg, method="reference")
    direct = estimate_noisy_accuracy(1, "None", "D", 1e-3, cfg, method="direct")
    assert abs(ref - direct) <= 3.0
    with pytest.raises(MetricsError):
        estimate_noisy_accuracy(1, "None", "D", 1e-3, cfg, method="bogus")


# -- improvement report ------------------------------------------------------

def _acc(code, mode, p, acc):
    return AccuracyRecord(1, code, mode, p, acc)


def test_improvement_report_reference_arithmetic():
    # relative-improvement arithmetic on published-style values
    records = [
        _acc("None", "D", 1e-3, 87.82),
        _acc("D5Surface", "D", 1e-3, 91.05),
    ]
    report = improvement_report(records)
    by_code = {r.code: r for r in report}
    assert by_code["D5Surface"].ai == 3.68
    assert by_code["None"].ai == 0.0

    records = [_acc("None", "BP", 1e-3, 85.36), _acc("Steane", "BP", 1e-3, 86.98)]
    assert improvement_report(records)[1].ai == 1.90


def test_improvement_report_equal_is_zero():
    records = [_acc("None", "D", 1e-3, 90.0), _acc("Steane", "D", 1e-3, 90.0)]
    assert improvement_report(records)[1].ai == 0.0


def test_improvement_report_averages_grid():
    records = [
        _acc("None", "D", 1e-3, 80.0),
        _acc("None", "D", 1e-2, 90.0),
        _acc("Steane", "D", 1e-3, 90.0),
        _acc("Steane", "D", 1e-2, 95.0),
    ]
    report = improvement_report(records)
    assert report[0].aa == 85.0 and report[1].aa == 92.5
    assert report[1].ai == round((92.5 - 85.0) / 85.0 * 100, 2)


def test_improvement_report_missing_baseline():
    with pytest.raises(MetricsError):
        improvement_report([_acc("Steane", "D", 1e-3, 90.0)])


def test_accuracy_records_from_sweep(tmp_path):
    cfg = _small_config(tmp_path, "acc.csv")
    records = run_pst_sweep(cfg)
    accs = accuracy_records_from_sweep(records, cfg)
    assert len(accs) == len(cfg.codes) * len(cfg.modes) * len(cfg.noise_grid)
    assert all(0.0 <= a.accuracy <= 100.0 for a in accs)
    report = improvement_report(accs)
    assert {r.code for r in report} == set(cfg.codes)


# -- overhead report ---------------------------------------------------------

@pytest.fixture(scope="module")
def overhead():
    return overhead_report(classifiers=(1, 2), master_seed=MASTER)


def test_overhead_orderings(overhead):
    rows, _ = overhead
    order = ("None", "Steane", "D3Surface", "D5Surface")
    for classifier in (1, 2):
        labels = {r.class_label for r in rows if r.classifier == classifier}
        for label in labels:
            sel = {r.code: r for r in rows if r.classifier == classifier and r.class_label == label}
            qubits = [sel[c].qubits for c in order]
            gates = [sel[c].gate_count for c in order]
            assert all(a < b for a, b in zip(qubits, qubits[1:])), (classifier, label, qubits)
            assert all(a < b for a, b in zip(gates, gates[1:])), (classifier, label, gates)


def test_overhead_bare_rows_echo_composites(overhead):
    rows, _ = overhead
    for r in rows:
        if r.code == "None":
            assert r.qubits == r.classifier
            assert r.gate_count >= r.classifier  # at least the readout measures


def test_overhead_averages_are_means(overhead):
    rows, avgs = overhead
    for avg in avgs:
        group = [r for r in rows if r.classifier == avg.classifier and r.code == avg.code]
        assert avg.class_label == "avg"
        assert avg.qubits == int(np.floor(np.mean([r.qubits for r in group]) + 0.5))
        assert avg.gate_count == int(np.floor(np.mean([r.gate_count for r in group]) + 0.5))


# -- emit_results -------------------------------------------------------------

def test_emit_results_csv_roundtrip(tmp_path):
    records = [
        ResultRecord(1, "M", "None", "D", 1e-4, 2000, 0.9915),
        ResultRecord(1, "C", "Steane", "BPD", 1e-2, 2000, 0.843),
    ]
    path = tmp_path / "out.csv"
    text = emit_results(records, "csv", path)
    assert text.splitlines()[0] == "classifier,class_label,code,mode,p,shots,pst"
    assert len(text.splitlines()) == 3
    assert read_result_csv(path) == records


def test_emit_results_json_mirrors_csv(tmp_path):
    records = [ResultRecord(2, "R", "D5Surface", "BP", 3e-3, 500, 0.978)]
    csv_text = emit_results(records, "csv")
    json_rows = json.loads(emit_results(records, "json"))
    header = csv_text.splitlines()[0].split(",")
    values = csv_text.splitlines()[1].split(",")
    assert list(json_rows[0]) == header
    for name, value in zip(header, values):
        assert str(json_rows[0][name]) in (value, str(value))


def test_emit_results_empty_is_header_only():
    text = emit_results([], "csv")
    assert text == "classifier,class_label,code,mode,p,shots,pst\n"
    assert json.loads(emit_results([], "json")) == []


def test_emit_results_rejects_mixed_and_unknown():
    recs = [
        ResultRecord(1, "M", "None", "D", 1e-4, 100, 0.99),
        ImprovementRecord(1, "D", "Steane", 90.0, 1.0),
    ]
    with pytest.raises(MetricsError):
        emit_results(recs, "csv")
    with pytest.raises(MetricsError):
        emit_results([], "yaml")


# -- CLI ----------------------------------------------------------------------

def test_cli_pipeline(tmp_path):
    data = tmp_path / "d.csv"
    model = tmp_path / "m.json"
    synth = tmp_path / "s.txt"
    sweep_out = tmp_path / "sweep.csv"
    cfg = tmp_path / "cfg.json"

    assert cli_main(["gen-data", "--dim", "2", "--seed", str(MASTER), "--out", str(data)]) == 0
    assert cli_main(["train", "--data", str(data), "--seed", str(MASTER),
                     "--folds", "5", "--out", str(model)]) == 0
    payload = json.loads(model.read_text())
    assert 0.85 <= payload["test_accuracy"] <= 1.0

    assert cli_main(["synth", "--model", str(model), "--gate-set", "surface",
                     "--out", str(synth)]) == 0
    assert "width 1" in synth.read_text()

    cfg.write_text(json.dumps({
        "classifier": 1, "codes": ["None", "Steane"], "modes": ["D"],
        "noise_grid": [1e-3], "shots": 200, "master_seed": MASTER,
        "output_path": str(sweep_out),
    }))
    assert cli_main(["sweep", "--config", str(cfg)]) == 0
    assert sweep_out.exists()

    for kind in ("pst", "accuracy", "improvement", "overhead"):
        out = tmp_path / f"{kind}.csv"
        assert cli_main(["report", "--records", str(sweep_out), "--kind", kind,
                         "--format", "csv", "--out", str(out)]) == 0
        assert out.read_text().startswith(("classifier",))


def test_cli_errors_are_nonzero(tmp_path):
    assert cli_main(["sweep", "--config", str(tmp_path / "missing.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"classifier": 9}))
    assert cli_main(["sweep", "--config", str(bad)]) == 1
    assert cli_main(["report", "--records", str(tmp_path / "nope.csv"),
                     "--kind", "pst"]) == 1
