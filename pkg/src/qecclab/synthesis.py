"""Greedy de-parameterization of trained classifier composites.

Replaces each composite (amplitude encoding + classifier block) unitary with a
discrete Clifford circuit so the whole pipeline becomes stabilizer-simulable
and can be wrapped in code protection.  The synthesis objective is the
phase-invariant overlap |Tr(U†V)| / dim; measurement-outcome agreement is
validated downstream rather than optimized directly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import circuits as qc
from .circuits import Circuit, Gate, GateKind
from .classifier import (
    ClassifierParams,
    DataPoint,
    Dataset,
    amplitude_encode,
    classifier_unitary,
    fold_indices,
    labels_for_dimensionality,
)
from .statevector import circuit_unitary, embed_gate_unitary


class SynthesisError(ValueError):
    pass


#: Discrete gates available on each logical platform.  The harder surface-code
#: set omits S/Sdg, which that platform's logical layer does not implement.
STEANE_GATE_SET: tuple[GateKind, ...] = (
    GateKind.H,
    GateKind.S,
    GateKind.SDG,
    GateKind.X,
    GateKind.Y,
    GateKind.Z,
    GateKind.CX,
)
SURFACE_GATE_SET: tuple[GateKind, ...] = (
    GateKind.H,
    GateKind.X,
    GateKind.Y,
    GateKind.Z,
    GateKind.CX,
)
#: With no code protection the full single/two-qubit Clifford set is allowed.
FULL_GATE_SET: tuple[GateKind, ...] = STEANE_GATE_SET

_UNITARITY_TOL = 1e-9


@dataclass(frozen=True)
class TargetUnitary:
    """A 2x2 or 4x4 unitary synthesis target."""

    dimension: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        if self.dimension not in (2, 4):
            raise SynthesisError("target dimension must be 2 or 4")
        m = np.asarray(self.entries, dtype=np.complex128)
        if m.shape != (self.dimension, self.dimension):
            raise SynthesisError("entries shape does not match dimension")
        if not np.allclose(m.conj().T @ m, np.eye(self.dimension), atol=_UNITARITY_TOL):
            raise SynthesisError("entries are not unitary")
        object.__setattr__(self, "entries", m)

    @property
    def num_qubits(self) -> int:
        return 1 if self.dimension == 2 else 2


@dataclass(frozen=True)
class SynthesisResult:
    circuit: Circuit
    fidelity: float
    gate_budget_used: int


def composite_unitary(point: DataPoint, params: ClassifierParams) -> TargetUnitary:
    """Exact unitary of encoding followed by the classifier block.

    Measurements are excluded; the product is what a discrete replacement
    circuit must approximate.
    """
    dim = len(point.features)
    if 2**params.arity != dim:
        raise SynthesisError("point dimensionality does not match classifier arity")
    enc = circuit_unitary(amplitude_encode(point))
    cls = classifier_unitary(params)
    return TargetUnitary(dim, cls @ enc)


def _candidate_gates(gate_set, width: int) -> list[Gate]:
    """All placements of the allowed kinds, in canonical tie-break order.

    Order is gate-kind declaration order, then lexicographic operands.
    """
    if not gate_set:
        raise SynthesisError("empty gate set")
    allowed = set(gate_set)
    out: list[Gate] = []
    for kind in GateKind:
        if kind not in allowed:
            continue
        if kind in (GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.MEASURE_Z, GateKind.RESET):
            raise SynthesisError(f"{kind.value} is not a discrete synthesis gate")
        if kind in (GateKind.CX, GateKind.CZ):
            if width < 2:
                continue
            for a in range(width):
                for b in range(width):
                    if a != b:
                        out.append(Gate(kind, (a, b)))
        else:
            for q in range(width):
                out.append(Gate(kind, (q,)))
    return out


def _overlap(u: np.ndarray, v: np.ndarray, dim: int) -> float:
    return abs(np.trace(u.conj().T @ v)) / dim


def greedy_synthesize(
    target: TargetUnitary,
    gate_set=FULL_GATE_SET,
    max_gates: int | None = None,
    stall_limit: int = 3,
) -> SynthesisResult:
    """Build a discrete circuit one best-gate-at-a-time.

    Each step appends a single gate, scored by the best fidelity reachable
    within `stall_limit` further gates (a shallow lookahead; pure one-step
    scoring strands the search on plateaus where multi-gate words like the
    H-S-H square root of X have no improving prefix).  Ties break on immediate
    fidelity, then on the canonical candidate order, so results are
    deterministic.  The search stops after `stall_limit` consecutive appends
    without a new best, or at `max_gates`, and returns the best prefix seen.
    """
    width = target.num_qubits
    if max_gates is None:
        max_gates = 12 if width == 1 else 24
    candidates = _candidate_gates(gate_set, width)
    embedded = [embed_gate_unitary(g, width) for g in candidates]
    dim = target.dimension
    u = target.entries

    def lookahead(mat: np.ndarray, depth: int) -> tuple[float, int]:
        """Best fidelity within `depth` further gates and how many it takes."""
        score, steps = _overlap(u, mat, dim), 0
        if depth > 0:
            for g in embedded:
                s, d = lookahead(g @ mat, depth - 1)
                if s > score + 1e-12 or (s > score - 1e-12 and d + 1 < steps):
                    score, steps = s, d + 1
        return score, steps

    current = np.eye(dim, dtype=np.complex128)
    gates: list[Gate] = []
    best_fid = _overlap(u, current, dim)
    best_len = 0
    stall = 0
    while len(gates) < max_gates and stall < stall_limit:
        # rank candidates by lookahead score, then by how soon that score is
        # realized (so promising multi-gate words actually get completed
        # before the stall budget runs out), then by immediate fidelity
        step = (-1.0, 0, -1.0)
        step_idx = -1
        for idx, mat in enumerate(embedded):
            nxt = mat @ current
            fid = _overlap(u, nxt, dim)
            score, depth = lookahead(nxt, stall_limit - 1)
            key = (score, -depth, fid)
            if (
                key[0] > step[0] + 1e-12
                or (key[0] > step[0] - 1e-12 and key[1] > step[1])
                or (key[0] > step[0] - 1e-12 and key[1] == step[1] and key[2] > step[2] + 1e-12)
            ):
                step = key
                step_idx = idx
        gates.append(candidates[step_idx])
        current = embedded[step_idx] @ current
        if step[2] > best_fid + 1e-12:
            best_fid = step[2]
            best_len = len(gates)
            stall = 0
        elif step[0] > best_fid + 1e-12:
            # no improvement yet, but the lookahead already sees one within
            # the window — keep walking toward it without burning the budget
            pass
        else:
            stall += 1
    return SynthesisResult(Circuit(width, tuple(gates[:best_len])), best_fid, best_len)


def _synthesized_prediction(point: DataPoint, result: SynthesisResult, labels) -> str:
    """Classify a point by the exact output distribution of its discrete circuit."""
    v = circuit_unitary(result.circuit)
    probs = np.round(np.abs(v[:, 0]) ** 2, 12)
    return labels[int(np.argmax(probs))]


def synthesis_accuracy_report(
    dataset: Dataset,
    params: ClassifierParams,
    gate_set=FULL_GATE_SET,
    folds: int = 5,
) -> tuple[float, float, float]:
    """Accuracy on the held-out split: exact circuits vs discrete replacements.

    Uses the first cross-validation fold's test indices, classifying each test
    point twice — once with the parameterized composite, once with its greedy
    Clifford synthesis — and reports (original, synthesized, reduction in
    percentage points).
    """
    labels = labels_for_dimensionality(dataset.dimensionality)
    _, test_idx = next(iter(fold_indices(dataset, folds)))
    points = [dataset.points[i] for i in test_idx]
    features = np.array([p.features for p in points])
    u = classifier_unitary(params)
    exact_probs = np.round(np.abs(features.astype(np.complex128) @ u.T) ** 2, 12)
    exact_pred = [labels[int(i)] for i in np.argmax(exact_probs, axis=1)]

    synth_pred = []
    for point in points:
        result = greedy_synthesize(composite_unitary(point, params), gate_set)
        synth_pred.append(_synthesized_prediction(point, result, labels))

    truth = [p.label for p in points]
    original = sum(a == b for a, b in zip(exact_pred, truth)) / len(truth)
    synthesized = sum(a == b for a, b in zip(synth_pred, truth)) / len(truth)
    return original, synthesized, (original - synthesized) * 100.0


def gate_set_for_code(code_name: str | None):
    """Map a platform name to its allowed discrete gate set."""
    if code_name is None or code_name == "None":
        return FULL_GATE_SET
    if code_name == "Steane":
        return STEANE_GATE_SET
    if code_name in ("D3Surface", "D5Surface"):
        return SURFACE_GATE_SET
    raise SynthesisError(f"unknown platform {code_name!r}")


def result_to_text(result: SynthesisResult) -> str:
    """Serialize a synthesized circuit in the standard circuit text format."""
    return qc.to_text(result.circuit)
