"""Encoder synthesis for arbitrary stabilizer codes (k = 1).

Strategy: find a Clifford word D that conjugates the row set
{logical_Z, S_1, ..., S_{n-1}} to {+Z_0, +Z_1, ..., +Z_{n-1}} and the
logical X to +X_0, via symplectic Gaussian elimination.  D maps the code
space onto the trivial code (data on qubit 0, the rest |0>), so the
encoder is D^{-1}: reversed inverse gates.  Works for any of the three
codes without per-code hand construction.
"""
from __future__ import annotations

import numpy as np

from .. import circuits as qc
from ..circuits import Circuit, Gate, GateKind
from .codes import StabilizerCode

__all__ = ["encoder_circuit"]


class _RowSet:
    """Pauli rows (x|z|sign) conjugated jointly by Clifford gates."""

    def __init__(self, paulis):
        self.x = np.array([p.x for p in paulis], dtype=np.uint8)
        self.z = np.array([p.z for p in paulis], dtype=np.uint8)
        self.r = np.zeros(len(paulis), dtype=np.uint8)

    def apply(self, gate: Gate) -> None:
        k = gate.kind
        q = gate.qubits
        if k is GateKind.H:
            a = q[0]
            self.r ^= self.x[:, a] & self.z[:, a]
            self.x[:, a], self.z[:, a] = self.z[:, a].copy(), self.x[:, a].copy()
        elif k is GateKind.S:
            a = q[0]
            self.r ^= self.x[:, a] & self.z[:, a]
            self.z[:, a] ^= self.x[:, a]
        elif k is GateKind.SDG:
            a = q[0]
            self.r ^= self.x[:, a]
            self.r ^= self.x[:, a] & self.z[:, a]
            self.z[:, a] ^= self.x[:, a]
        elif k is GateKind.X:
            self.r ^= self.z[:, q[0]]
        elif k is GateKind.Z:
            self.r ^= self.x[:, q[0]]
        elif k is GateKind.CX:
            a, b = q
            self.r ^= self.x[:, a] & self.z[:, b] & (self.x[:, b] ^ self.z[:, a] ^ 1)
            self.x[:, b] ^= self.x[:, a]
            self.z[:, a] ^= self.z[:, b]
        elif k is GateKind.CZ:
            for g in (qc.h(q[1]), qc.cx(q[0], q[1]), qc.h(q[1])):
                self.apply(g)
        else:  # pragma: no cover - internal misuse
            raise ValueError(f"unsupported gate in row reduction: {k.value}")


_INVERSE = {
    GateKind.H: GateKind.H,
    GateKind.S: GateKind.SDG,
    GateKind.SDG: GateKind.S,
    GateKind.X: GateKind.X,
    GateKind.Z: GateKind.Z,
    GateKind.CX: GateKind.CX,
    GateKind.CZ: GateKind.CZ,
}


def encoder_circuit(code: StabilizerCode) -> Circuit:
    """Clifford circuit encoding qubit 0's state into the code's logical qubit.

    The remaining n-1 data qubits must start in |0>.  Deterministic for a
    given code.
    """
    n = code.n
    rows = _RowSet([code.logical_z, *code.stabilizer_generators, code.logical_x])
    lx = n  # index of the tracked logical-X row
    gates: list[Gate] = []

    def emit(gate: Gate) -> None:
        gates.append(gate)
        rows.apply(gate)

    for q in range(n):
        pivot = next((j for j in range(q, n) if rows.x[q, j]), None)
        if pivot is None:
            pivot = next(j for j in range(q, n) if rows.z[q, j])
            emit(qc.h(pivot))
        if rows.z[q, pivot]:
            emit(qc.sdg(pivot))  # Y -> X at the pivot
        if pivot != q:
            emit(qc.cx(q, pivot))
            emit(qc.cx(pivot, q))
            emit(qc.cx(q, pivot))
        for j in range(n):
            if j != q and rows.x[q, j]:
                emit(qc.cx(q, j))
        if rows.z[q, q]:
            emit(qc.sdg(q))
        for j in range(n):
            if j != q and rows.z[q, j]:
                emit(qc.cz(q, j))
        emit(qc.h(q))  # X_q -> Z_q
        if rows.r[q]:
            emit(qc.x(q))

    # reduce the logical X (commutes with every +Z_j except j=0)
    if rows.z[lx, 0]:
        emit(qc.sdg(0))
    for j in range(1, n):
        if rows.z[lx, j]:
            emit(qc.cz(0, j))
    if rows.r[lx]:
        emit(qc.z(0))

    expected_x = np.zeros((n + 1, n), dtype=np.uint8)
    expected_x[lx, 0] = 1
    expected_z = np.eye(n + 1, n, k=0, dtype=np.uint8)
    expected_z[lx] = 0
    if not (
        np.array_equal(rows.x, expected_x)
        and np.array_equal(rows.z, expected_z)
        and not rows.r.any()
    ):  # pragma: no cover - guards the reduction algebra
        raise AssertionError("row reduction failed to reach canonical form")

    inverse = tuple(
        Gate(_INVERSE[g.kind], g.qubits, None) for g in reversed(gates)
    )
    return Circuit(n, inverse)
