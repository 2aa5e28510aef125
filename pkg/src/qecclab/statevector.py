"""Dense statevector simulator for small circuits.

Exact reference backend: supports arbitrary rotations, used for classifier
training/prediction and as the oracle the stabilizer backend is checked
against.  Qubit 0 is the most significant bit of a bitstring (big-endian).
"""
from __future__ import annotations

import math

import numpy as np

from .circuits import Circuit, Gate, GateKind

DENSE_QUBIT_CAP = 26  # 2**26 complex128 amplitudes ~ 1 GiB

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

_H = np.array([[_INV_SQRT2, _INV_SQRT2], [_INV_SQRT2, -_INV_SQRT2]], dtype=complex)
_S = np.array([[1, 0], [0, 1j]], dtype=complex)
_SDG = np.array([[1, 0], [0, -1j]], dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class StateVectorError(ValueError):
    pass


def gate_unitary(gate: Gate) -> np.ndarray:
    """Dense matrix of a (non-measurement) gate on its own qubits."""
    kind = gate.kind
    if kind is GateKind.H:
        return _H
    if kind is GateKind.S:
        return _S
    if kind is GateKind.SDG:
        return _SDG
    if kind is GateKind.X:
        return _X
    if kind is GateKind.Y:
        return _Y
    if kind is GateKind.Z:
        return _Z
    if kind is GateKind.RX:
        c, sn = math.cos(gate.angle / 2), math.sin(gate.angle / 2)
        return np.array([[c, -1j * sn], [-1j * sn, c]], dtype=complex)
    if kind is GateKind.RY:
        c, sn = math.cos(gate.angle / 2), math.sin(gate.angle / 2)
        return np.array([[c, -sn], [sn, c]], dtype=complex)
    if kind is GateKind.RZ:
        return np.array(
            [[np.exp(-0.5j * gate.angle), 0], [0, np.exp(0.5j * gate.angle)]], dtype=complex
        )
    if kind is GateKind.CX:
        return np.array(
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
        )
    if kind is GateKind.CZ:
        return np.diag([1, 1, 1, -1]).astype(complex)
    raise StateVectorError(f"{kind.value} has no unitary")


def embed_gate_unitary(gate: Gate, width: int) -> np.ndarray:
    """Dense matrix of a gate acting inside a `width`-qubit register.

    Big-endian convention: qubit 0 is the most significant bit of the basis
    index.
    """
    g = gate_unitary(gate)
    arity = len(gate.qubits)
    dim = 2**width
    full = np.zeros((dim, dim), dtype=np.complex128)
    for col in range(dim):
        bits = [(col >> (width - 1 - q)) & 1 for q in range(width)]
        sub_in = 0
        for t, q in enumerate(gate.qubits):
            sub_in |= bits[q] << (arity - 1 - t)
        for sub_out in range(2**arity):
            amp = g[sub_out, sub_in]
            if amp == 0:
                continue
            out_bits = list(bits)
            for t, q in enumerate(gate.qubits):
                out_bits[q] = (sub_out >> (arity - 1 - t)) & 1
            row = 0
            for i, b in enumerate(out_bits):
                row |= b << (width - 1 - i)
            full[row, col] += amp
    return full


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of a circuit with measurements excluded."""
    dim = 2**circuit.width
    u = np.eye(dim, dtype=np.complex128)
    for gate in circuit.gates:
        if gate.kind is GateKind.MEASURE_Z:
            continue
        if gate.kind is GateKind.RESET:
            raise StateVectorError("Reset has no unitary")
        u = embed_gate_unitary(gate, circuit.width) @ u
    return u


class StateVector:
    """2**n complex amplitudes; mutated in place by apply methods."""

    def __init__(self, num_qubits: int, amplitudes: np.ndarray | None = None):
        if not 1 <= num_qubits <= DENSE_QUBIT_CAP:
            raise StateVectorError(
                f"width exceeds dense cap: {num_qubits} not in [1, {DENSE_QUBIT_CAP}]"
            )
        self.num_qubits = num_qubits
        if amplitudes is None:
            amplitudes = np.zeros(2**num_qubits, dtype=complex)
            amplitudes[0] = 1.0
        else:
            amplitudes = np.asarray(amplitudes, dtype=complex)
            if amplitudes.shape != (2**num_qubits,):
                raise StateVectorError("amplitude length must be 2**num_qubits")
        self.amplitudes = amplitudes

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def apply_gate(self, gate: Gate) -> None:
        if gate.kind is GateKind.MEASURE_Z:
            raise StateVectorError("use measure_all / outcome_distribution for measurement")
        if gate.kind is GateKind.RESET:
            raise StateVectorError("Reset is not unitary; not supported on this backend")
        if any(q >= self.num_qubits for q in gate.qubits):
            raise StateVectorError(f"operand out of range: {gate.qubits}")
        u = gate_unitary(gate)
        n = self.num_qubits
        psi = self.amplitudes.reshape((2,) * n)
        axes = list(gate.qubits)
        k = len(axes)
        moved = np.moveaxis(psi, axes, range(k))
        shape = moved.shape
        out = (u @ moved.reshape(2**k, -1)).reshape(shape)
        self.amplitudes = np.moveaxis(out, range(k), axes).reshape(-1)

    def run(self, circuit: Circuit) -> None:
        if circuit.width > self.num_qubits:
            raise StateVectorError("circuit wider than state")
        for gate in circuit.gates:
            self.apply_gate(gate)


def init_state(num_qubits: int) -> StateVector:
    return StateVector(num_qubits)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    out = state.copy()
    out.apply_gate(gate)
    return out


def run_circuit(circuit: Circuit) -> StateVector:
    """Run all non-measurement gates of `circuit` from |0...0>."""
    state = StateVector(max(circuit.width, 1))
    for gate in circuit.gates:
        if gate.kind is GateKind.MEASURE_Z:
            continue
        state.apply_gate(gate)
    return state


def outcome_distribution(state: StateVector, qubits: list[int] | None = None) -> dict[str, float]:
    """Born-rule probabilities of the listed qubits, marginalized over the rest.

    Keys are bitstrings ordered as `qubits`; values sum to 1.
    """
    n = state.num_qubits
    if qubits is None:
        qubits = list(range(n))
    if len(set(qubits)) != len(qubits):
        raise StateVectorError(f"duplicate indices: {qubits}")
    if any(q >= n or q < 0 for q in qubits):
        raise StateVectorError(f"operand out of range: {qubits}")
    probs = np.abs(state.amplitudes.reshape((2,) * n)) ** 2
    keep = np.moveaxis(probs, qubits, range(len(qubits)))
    marginal = keep.reshape(2 ** len(qubits), -1).sum(axis=1)
    return {
        format(i, f"0{len(qubits)}b"): float(p) for i, p in enumerate(marginal) if p > 0.0
    }


def measure_all(state: StateVector, rng: np.random.Generator) -> tuple[str, StateVector]:
    """Sample a full-register outcome and return the collapsed state."""
    probs = np.abs(state.amplitudes) ** 2
    probs = probs / probs.sum()
    idx = int(rng.choice(len(probs), p=probs))
    collapsed = np.zeros_like(state.amplitudes)
    collapsed[idx] = state.amplitudes[idx] / abs(state.amplitudes[idx])
    bits = format(idx, f"0{state.num_qubits}b")
    return bits, StateVector(state.num_qubits, collapsed)


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2 — the global-phase-insensitive equality measure."""
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def debug_dump(state: StateVector) -> str:
    """Readable amplitude table; guarded to small registers."""
    if state.num_qubits > 5:
        raise StateVectorError("debug dump limited to 5 qubits")
    lines = []
    for i, amp in enumerate(state.amplitudes):
        lines.append(f"|{format(i, f'0{state.num_qubits}b')}>  {amp.real:+.6f}{amp.imag:+.6f}j")
    return "\n".join(lines)
