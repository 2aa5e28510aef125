"""PST estimation and the noise sweep driver.

A sweep cell is one (reference point, code, error mode, noise level) tuple.
Cells are seeded individually by hashing the master seed with the cell key, so
results never depend on execution order, worker count, or interruption —
reruns and resumes are byte-identical.
"""
from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .. import circuits as qc
from ..circuits import Circuit, CircuitBuilder, GateKind
from ..classifier import (
    ClassifierParams,
    DataPoint,
    class_reference_points,
    generate_dataset,
    labels_for_dimensionality,
    train,
)
from ..noise import (
    ErrorMode,
    FaultRealization,
    NoiseModel,
    location_no_fault_probability,
    no_fault_probability,
    sample_faults,
    sample_site_paulis,
)
from ..qecc import CodeName, assemble_protected_circuit, build_code, decode_and_readout
from ..sampling import exact_outcome_distribution
from ..synthesis import composite_unitary, gate_set_for_code, greedy_synthesize
from ..tableau import Tableau, run_clifford_circuit
from .config import ExperimentConfig

WORKER_ENV = "QECCLAB_WORKERS"

RESULT_FIELDS = ("classifier", "class_label", "code", "mode", "p", "shots", "pst")


class SweepError(RuntimeError):
    pass


@dataclass(frozen=True)
class ResultRecord:
    classifier: int
    class_label: str
    code: str
    mode: str
    p: float
    shots: int
    pst: float
    wall_time: float = 0.0  # informational only; never persisted

    def __post_init__(self) -> None:
        if not 0.0 <= self.pst <= 1.0:
            raise SweepError(f"pst out of range: {self.pst}")


@lru_cache(maxsize=None)
def trained_model(dimensionality: int, seed: int):
    """Dataset and trained classifier for a master seed (cached per process)."""
    dataset = generate_dataset(dimensionality, seed)
    report = train(dataset)
    return dataset, report


@lru_cache(maxsize=None)
def synthesized_composite(point: DataPoint, params: ClassifierParams, code: str) -> Circuit:
    """The point's composite snapped to the code's discrete gate set."""
    target = composite_unitary(point, params)
    return greedy_synthesize(target, gate_set_for_code(code)).circuit


def _bare_executable(synth: Circuit) -> Circuit:
    builder = CircuitBuilder(synth.width)
    builder.extend(synth.gates)
    for q in range(synth.width):
        builder.add(qc.measure_z(q))
    return builder.build()


@lru_cache(maxsize=None)
def _protected_plan(synth: Circuit, code: str, rounds_per_layer: int):
    return assemble_protected_circuit(synth, build_code(CodeName(code)), rounds_per_layer)


@lru_cache(maxsize=None)
def _logical_distribution(synth: Circuit) -> tuple:
    """Exact noiseless outcome distribution of the logical circuit.

    Valid for the protected circuit too: noiselessly every stabilizer
    measurement on a code state is deterministic, so the only randomness is
    the logical readout, whose law matches the bare circuit's.
    """
    dist = exact_outcome_distribution(_bare_executable(synth))
    keys = sorted(dist)
    return tuple(keys), tuple(dist[k] for k in keys)


def clean_success_probability(point: DataPoint, params: ClassifierParams, code: str) -> float:
    """Exact noiseless probability that the synthesized circuit returns the true label."""
    synth = synthesized_composite(point, params, code)
    labels = labels_for_dimensionality(len(point.features))
    keys, probs = _logical_distribution(synth)
    return sum(pr for k, pr in zip(keys, probs) if labels[int(k, 2)] == point.label)


def cell_seed(master_seed: int, *key) -> int:
    """Deterministic per-cell RNG seed from the master seed and cell key."""
    text = "|".join([str(master_seed)] + [str(k) for k in key])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _noise_sites(plan) -> list[tuple[int, int]]:
    """Noise sites (gate index, physical data qubit) of a protected plan.

    Data-qubit noise: every data qubit of every patch is exposed to the
    error channel once per logical layer — after the layer's gate block,
    before its syndrome rounds — and once more immediately before the
    transversal readout.  Encoding and syndrome extraction are noiseless:
    the channel acts on the stored data the code protects, and the sweep
    compares how bare and encoded runs weather that same channel.
    """
    sites: list[tuple[int, int]] = []
    for g in plan.layer_end_gates:
        for patch in plan.patches:
            sites.extend((g, q) for q in patch.data)
    for g, patch in zip(plan.readout_start_gates, plan.patches):
        sites.extend((g, q) for q in patch.data)
    return sites


def estimate_pst(
    point: DataPoint,
    params: ClassifierParams,
    code: str,
    mode: str,
    p: float,
    shots: int,
    seed: int,
    rounds_per_layer: int = 1,
) -> ResultRecord:
    """Monte Carlo estimate of the probability of successful trials.

    Bare runs sample faults at every gate-operand location of the
    synthesized circuit.  Protected runs expose each patch data qubit to
    the identical per-location channel once per logical layer and once
    before readout (see `_noise_sites`).  Shots with no fault anywhere are
    drawn in one batch from the exact noiseless outcome distribution
    (fault-free protected runs reproduce the logical circuit's law
    exactly); only faulty shots are simulated.
    """
    start = time.perf_counter()
    model = NoiseModel(ErrorMode(mode), p)
    rng = np.random.default_rng(seed)
    dim = len(point.features)
    labels = labels_for_dimensionality(dim)
    synth = synthesized_composite(point, params, code)

    executable = _bare_executable(synth)
    plan = None if code == "None" else _protected_plan(synth, code, rounds_per_layer)
    sites = None if plan is None else _noise_sites(plan)
    if plan is not None:
        # the gates before the first noise site are identical every shot;
        # evolve them once and replay faulty shots from a tableau copy
        first_site = min(g for g, _ in sites)
        split = 0
        while split < first_site and plan.total.gates[split].kind not in (
            GateKind.MEASURE_Z,
            GateKind.RESET,
        ):
            split += 1
        prefix_tab = Tableau(plan.total.width)
        for gate in plan.total.gates[:split]:
            prefix_tab.apply_gate(gate)
        suffix = Circuit(plan.total.width, plan.total.gates[split:])

    keys, probs = _logical_distribution(synth)
    success_keys = {k for k in keys if labels[int(k, 2)] == point.label}

    if sites is None:
        p_clean = no_fault_probability(executable, model)
    else:
        p_clean = location_no_fault_probability(model) ** len(sites)
    clean_shots = int(rng.binomial(shots, p_clean))
    counts = rng.multinomial(clean_shots, probs)
    successes = sum(int(c) for k, c in zip(keys, counts) if k in success_keys)

    for _ in range(shots - clean_shots):
        if sites is None:
            faults = []
            while not faults:
                faults = sample_faults(executable, model, rng)
            record = run_clifford_circuit(executable, faults, rng)
            bits = "".join(str(b) for b in record)
        else:
            drawn: list[tuple[int, str]] = []
            while not drawn:
                drawn = sample_site_paulis(len(sites), model, rng)
            physical = [
                FaultRealization(sites[i][0] - split, sites[i][1], pauli)
                for i, pauli in drawn
            ]
            record = run_clifford_circuit(suffix, physical, rng, tableau=prefix_tab.copy())
            bits = decode_and_readout(plan, record)
        if bits in success_keys:
            successes += 1

    arity = 1 if dim == 2 else 2
    return ResultRecord(
        classifier=arity,
        class_label=point.label,
        code=code,
        mode=mode,
        p=p,
        shots=shots,
        pst=successes / shots,
        wall_time=time.perf_counter() - start,
    )


def _format_float(x: float) -> str:
    return f"{x:.6g}"


def format_record(record: ResultRecord) -> str:
    return ",".join(
        [
            str(record.classifier),
            record.class_label,
            record.code,
            record.mode,
            _format_float(record.p),
            str(record.shots),
            _format_float(record.pst),
        ]
    )


def parse_record_line(line: str) -> ResultRecord:
    parts = line.rstrip("\n").split(",")
    if len(parts) != len(RESULT_FIELDS):
        raise SweepError(f"malformed record line: {line!r}")
    return ResultRecord(
        classifier=int(parts[0]),
        class_label=parts[1],
        code=parts[2],
        mode=parts[3],
        p=float(parts[4]),
        shots=int(parts[5]),
        pst=float(parts[6]),
    )


def _record_key(record: ResultRecord) -> tuple:
    return (record.class_label, record.code, record.mode, _format_float(record.p))


def write_sweep_meta(config: ExperimentConfig, path) -> None:
    """Companion JSON next to a sweep CSV so reports never retrain blindly."""
    payload = {
        "classifier": config.classifier,
        "codes": list(config.codes),
        "modes": list(config.modes),
        "noise_grid": list(config.noise_grid),
        "shots": config.shots,
        "master_seed": config.master_seed,
        "rounds_per_layer": config.rounds_per_layer,
        "output_path": str(config.output_path),
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def read_sweep_meta(path) -> ExperimentConfig:
    """Rebuild the sweep's configuration from its companion JSON."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    for key in ("codes", "modes", "noise_grid"):
        raw[key] = tuple(raw[key])
    return ExperimentConfig(**raw)


def sweep_cells(config: ExperimentConfig) -> list[tuple]:
    """Cell keys (label, code, mode, p) in canonical sweep order."""
    dim = 2 if config.classifier == 1 else 4
    labels = labels_for_dimensionality(dim)
    return [
        (label, code, mode, p)
        for label in labels
        for code in config.codes
        for mode in config.modes
        for p in config.noise_grid
    ]


def _run_cell(args) -> ResultRecord:
    point, params, code, mode, p, shots, seed, rounds = args
    return estimate_pst(point, params, code, mode, p, shots, seed, rounds)


def worker_count() -> int:
    raw = os.environ.get(WORKER_ENV, "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise SweepError(f"{WORKER_ENV} must be an integer, got {raw!r}") from exc
    return max(1, n)


def run_pst_sweep(config: ExperimentConfig) -> list[ResultRecord]:
    """Run the full cartesian sweep, streaming records to the output CSV.

    Records are written in canonical cell order as they complete.  Existing
    rows in the output file are reused instead of recomputed, so an
    interrupted sweep resumes where it stopped and still produces the same
    bytes as an uninterrupted run.
    """
    dim = 2 if config.classifier == 1 else 4
    dataset, report = trained_model(dim, config.master_seed)
    refs = class_reference_points(dataset)
    cells = sweep_cells(config)

    out = Path(config.output_path)
    write_sweep_meta(config, Path(str(out) + ".meta.json"))
    header = ",".join(RESULT_FIELDS)
    existing: dict[tuple, ResultRecord] = {}
    if out.exists():
        lines = out.read_text(encoding="utf-8").splitlines()
        if lines and lines[0] != header:
            raise SweepError(f"output file {out} has an unexpected header")
        for line in lines[1:]:
            rec = parse_record_line(line)
            existing[_record_key(rec)] = rec

    pending = []
    for label, code, mode, p in cells:
        key = (label, code, mode, _format_float(p))
        if key not in existing:
            seed = cell_seed(config.master_seed, dim, label, code, mode, _format_float(p))
            pending.append(
                (refs[label], report.params, code, mode, p, config.shots, seed,
                 config.rounds_per_layer)
            )

    workers = worker_count()
    pool = None
    if workers > 1 and len(pending) > 1:
        pool = ProcessPoolExecutor(max_workers=workers)
        fresh_iter = pool.map(_run_cell, pending)
    else:
        fresh_iter = map(_run_cell, pending)

    records: list[ResultRecord] = []
    write_header = not out.exists()
    try:
        fh = open(out, "a", encoding="utf-8")
    except OSError as exc:
        raise SweepError(f"cannot open output path {out}: {exc}") from exc
    try:
        with fh:
            if write_header:
                fh.write(header + "\n")
            # pending cells arrive in canonical order, so fresh results can be
            # streamed straight to disk as they complete
            for label, code, mode, p in cells:
                key = (label, code, mode, _format_float(p))
                if key in existing:
                    records.append(existing[key])
                else:
                    rec = next(fresh_iter)
                    if _record_key(rec) != key:
                        raise SweepError("sweep results arrived out of order")
                    fh.write(format_record(rec) + "\n")
                    fh.flush()
                    records.append(rec)
    finally:
        if pool is not None:
            pool.shutdown()
    return records
