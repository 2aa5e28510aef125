"""Assembly of fully protected physical circuits and classical decoding.

`assemble_protected_circuit` turns a small logical Clifford circuit into:
per-patch encoder, then per logical layer a physical gate block followed
by syndrome-extraction rounds on every patch, then a transversal Z-basis
measurement of all data qubits.  `decode_and_readout` replays a shot
record against the schedule, maintaining a classical Pauli frame per
physical qubit: each round's syndrome is compared with the frame's
predicted syndrome, the residual is decoded through the lookup table, and
the final data measurements both supply one more (noise-free) round of
Z-check parities and yield logical Z values on the logical-operator
supports, adjusted by the frame.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import circuits as qc
from ..circuits import Circuit, CircuitBuilder, Gate, GateKind
from .codes import StabilizerCode
from .decoder import build_decoder
from .encoder import encoder_circuit
from .extraction import AncillaPolicy, default_policy, syndrome_extraction_circuit
from .logical import LogicalGateError, logical_gate

__all__ = [
    "PatchLayout",
    "GateBlock",
    "SyndromeRound",
    "DataReadout",
    "ProtectedCircuitPlan",
    "assemble_protected_circuit",
    "decode_and_readout",
]


@dataclass(frozen=True)
class PatchLayout:
    data: tuple[int, ...]
    ancillas: tuple[int, ...]


@dataclass(frozen=True)
class GateBlock:
    gates: tuple[Gate, ...]


@dataclass(frozen=True)
class SyndromeRound:
    patch: int
    record_offset: int


@dataclass(frozen=True)
class DataReadout:
    patch: int
    record_offset: int


@dataclass(frozen=True)
class ProtectedCircuitPlan:
    code: StabilizerCode
    patches: tuple[PatchLayout, ...]
    rounds_per_layer: int
    logical: Circuit
    schedule: tuple
    total: Circuit
    # noise-window anchors, as gate indices of `total`: data-qubit noise is
    # injected after each logical layer's gate block (before that layer's
    # syndrome rounds) and immediately before the transversal readout
    layer_end_gates: tuple[int, ...]    # per layer: index of its last physical gate
    readout_start_gates: tuple[int, ...]  # per patch: index of its first readout measurement


def _append_remapped(builder: CircuitBuilder, circuit: Circuit, mapping) -> int:
    """Append a sub-circuit under a physical qubit mapping; returns #measurements."""
    measured = 0
    for gate in circuit.gates:
        builder.add(Gate(gate.kind, tuple(mapping[q] for q in gate.qubits), gate.angle))
        if gate.kind is GateKind.MEASURE_Z:
            measured += 1
    return measured


def _logical_layers(gates) -> list[list[Gate]]:
    depth: dict[int, int] = {}
    layers: list[list[Gate]] = []
    for gate in gates:
        layer = max((depth.get(q, 0) for q in gate.qubits), default=0)
        if layer == len(layers):
            layers.append([])
        layers[layer].append(gate)
        for q in gate.qubits:
            depth[q] = layer + 1
    return layers


def assemble_protected_circuit(
    logical: Circuit,
    code: StabilizerCode,
    rounds_per_layer: int = 1,
    policy: AncillaPolicy | None = None,
) -> ProtectedCircuitPlan:
    if logical.width > 2:
        raise ValueError("protected assembly supports at most 2 logical qubits")
    if rounds_per_layer < 0:
        raise ValueError("rounds_per_layer must be non-negative")
    policy = policy if policy is not None else default_policy(code)

    body: list[Gate] = []
    for gate in logical.gates:
        if gate.kind is GateKind.MEASURE_Z:
            continue  # terminal readout is transversal and always appended
        if gate.kind is GateKind.RESET or gate.is_rotation:
            raise LogicalGateError(
                f"logical circuit must be measurement-free Clifford, got {gate.kind.value}"
            )
        body.append(gate)

    n = code.n
    n_anc = policy.ancilla_count(code)
    stride = n + n_anc
    num_patches = logical.width
    patches = tuple(
        PatchLayout(
            data=tuple(range(p * stride, p * stride + n)),
            ancillas=tuple(range(p * stride + n, (p + 1) * stride)),
        )
        for p in range(num_patches)
    )
    builder = CircuitBuilder(stride * num_patches)
    schedule: list = []
    offset = 0
    n_gates = 0

    encoder = encoder_circuit(code)
    extraction = syndrome_extraction_circuit(code, policy)
    for patch in patches:
        _append_remapped(builder, encoder, patch.data)
        n_gates += len(encoder.gates)

    def emit_rounds() -> None:
        nonlocal offset, n_gates
        for _ in range(rounds_per_layer):
            for p, patch in enumerate(patches):
                _append_remapped(builder, extraction, patch.data + patch.ancillas)
                n_gates += len(extraction.gates)
                schedule.append(SyndromeRound(p, offset))
                offset += code.num_generators

    layers = _logical_layers(body)
    layer_end_gates: list[int] = []
    if not layers:
        emit_rounds()
    for layer in layers:
        block: list[Gate] = []
        for gate in layer:
            operand_patches = tuple(patches[q].data for q in gate.qubits)
            physical = logical_gate(code, gate.kind, operand_patches, builder.width)
            block.extend(physical.gates)
            builder.extend(physical.gates)
        n_gates += len(block)
        layer_end_gates.append(n_gates - 1)
        schedule.append(GateBlock(tuple(block)))
        emit_rounds()

    readout_start_gates: list[int] = []
    for p, patch in enumerate(patches):
        readout_start_gates.append(n_gates)
        for q in patch.data:
            builder.add(qc.measure_z(q))
        n_gates += len(patch.data)
        schedule.append(DataReadout(p, offset))
        offset += n

    return ProtectedCircuitPlan(
        code=code,
        patches=patches,
        rounds_per_layer=rounds_per_layer,
        logical=Circuit(logical.width, tuple(body)),
        schedule=tuple(schedule),
        total=builder.build(),
        layer_end_gates=tuple(layer_end_gates),
        readout_start_gates=tuple(readout_start_gates),
    )


def _conjugate_frame(fx: np.ndarray, fz: np.ndarray, gates) -> None:
    """Push the Pauli frame through a Clifford gate block (signs irrelevant)."""
    for gate in gates:
        k = gate.kind
        q = gate.qubits
        if k is GateKind.H:
            a = q[0]
            fx[a], fz[a] = fz[a], fx[a]
        elif k in (GateKind.S, GateKind.SDG):
            fz[q[0]] ^= fx[q[0]]
        elif k is GateKind.CX:
            a, b = q
            fx[b] ^= fx[a]
            fz[a] ^= fz[b]
        elif k is GateKind.CZ:
            a, b = q
            fz[b] ^= fx[a]
            fz[a] ^= fx[b]
        elif k in (GateKind.X, GateKind.Y, GateKind.Z):
            pass
        else:  # pragma: no cover - blocks only ever contain the above
            raise ValueError(f"cannot conjugate frame through {k.value}")


def _local_supports(code: StabilizerCode):
    z_checks = [
        (t, np.array(code.generator_schedules[g], dtype=np.int64), g)
        for t, g in enumerate(code.z_generator_indices)
    ]
    x_checks = [
        (t, np.array(code.generator_schedules[g], dtype=np.int64), g)
        for t, g in enumerate(code.x_generator_indices)
    ]
    logical_z = np.flatnonzero(code.logical_z.z)
    return z_checks, x_checks, logical_z


def decode_and_readout(plan: ProtectedCircuitPlan, record) -> str:
    """Logical Z bitstring (one bit per patch, patch order) from a shot record."""
    code = plan.code
    if len(record) != plan.total.classical_bits:
        raise ValueError(
            f"record length {len(record)} != scheduled measurements "
            f"{plan.total.classical_bits}"
        )
    rec = np.asarray(record, dtype=np.uint8)
    table = build_decoder(code)
    z_checks, x_checks, logical_z = _local_supports(code)
    fx = np.zeros(plan.total.width, dtype=np.uint8)
    fz = np.zeros(plan.total.width, dtype=np.uint8)
    logical_bits: dict[int, int] = {}

    for event in plan.schedule:
        if isinstance(event, GateBlock):
            _conjugate_frame(fx, fz, event.gates)
            continue
        data = np.array(plan.patches[event.patch].data, dtype=np.int64)
        if isinstance(event, SyndromeRound):
            bits = rec[event.record_offset:event.record_offset + code.num_generators]
            x_key = 0
            for t, support, g in z_checks:
                if int(bits[g]) ^ (int(fx[data[support]].sum()) & 1):
                    x_key |= 1 << t
            z_key = 0
            for t, support, g in x_checks:
                if int(bits[g]) ^ (int(fz[data[support]].sum()) & 1):
                    z_key |= 1 << t
            corr = table.correct_x_errors(x_key)
            if corr:
                fx[data[list(corr)]] ^= 1
            corr = table.correct_z_errors(z_key)
            if corr:
                fz[data[list(corr)]] ^= 1
        else:  # DataReadout: data parities give one perfect round of Z checks
            m = rec[event.record_offset:event.record_offset + code.n]
            x_key = 0
            for t, support, _g in z_checks:
                measured = int(m[support].sum()) & 1
                predicted = int(fx[data[support]].sum()) & 1
                if measured ^ predicted:
                    x_key |= 1 << t
            corr = table.correct_x_errors(x_key)
            if corr:
                fx[data[list(corr)]] ^= 1
            bit = (int(m[logical_z].sum()) + int(fx[data[logical_z]].sum())) & 1
            logical_bits[event.patch] = bit

    return "".join(str(logical_bits[p]) for p in range(len(plan.patches)))
