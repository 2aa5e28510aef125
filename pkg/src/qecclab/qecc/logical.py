"""Physical realizations of logical gates on encoded patches.

Paulis are the code's logical operator strings.  H is transversal for the
self-dual Steane code; for the rotated surface codes, transversal H swaps
the X and Z plaquette layouts, so it is followed by a 90-degree lattice
rotation (a SWAP network) that restores the canonical layout — downstream
bookkeeping (schedules, decoder, readout supports) stays unchanged.
Steane's logical S is qubit-wise Sdg.  CX is qubit-wise between two
patches of the same CSS code.
"""
from __future__ import annotations

from .. import circuits as qc
from ..circuits import Circuit, CircuitBuilder, Gate, GateKind
from .codes import CodeName, StabilizerCode

__all__ = ["LogicalGateError", "logical_gate", "supported_logical_gates"]


class LogicalGateError(ValueError):
    pass


_STEANE_SET = (
    GateKind.H, GateKind.S, GateKind.SDG,
    GateKind.X, GateKind.Y, GateKind.Z, GateKind.CX,
)
_SURFACE_SET = (GateKind.H, GateKind.X, GateKind.Y, GateKind.Z, GateKind.CX)


def supported_logical_gates(code: StabilizerCode) -> tuple[GateKind, ...]:
    return _STEANE_SET if code.name is CodeName.STEANE else _SURFACE_SET


def _rotation_cycles(d: int):
    """Cycles of the lattice rotation (r, c) -> (c, d-1-r) on qubit indices."""
    perm = {r * d + c: c * d + (d - 1 - r) for r in range(d) for c in range(d)}
    seen = set()
    for start in sorted(perm):
        if start in seen or perm[start] == start:
            seen.add(start)
            continue
        cycle = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt != start:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        yield cycle


def _emit_swap(builder: CircuitBuilder, a: int, b: int) -> None:
    builder.add(qc.cx(a, b))
    builder.add(qc.cx(b, a))
    builder.add(qc.cx(a, b))


def _emit_pauli(builder: CircuitBuilder, patch, x_bits, z_bits) -> None:
    for local, phys in enumerate(patch):
        xb, zb = int(x_bits[local]), int(z_bits[local])
        if xb and zb:
            builder.add(qc.y(phys))
        elif xb:
            builder.add(qc.x(phys))
        elif zb:
            builder.add(qc.z(phys))


def logical_gate(
    code: StabilizerCode,
    kind: GateKind,
    patches: tuple[tuple[int, ...], ...],
    width: int | None = None,
) -> Circuit:
    """Physical circuit implementing `kind` on the given patch(es).

    `patches` lists the physical data-qubit indices of each operand patch
    (length n each); CX takes two patches, everything else one.
    """
    if kind not in supported_logical_gates(code):
        raise LogicalGateError(f"unsupported logical gate {kind.value} for {code.name.value}")
    expected_patches = 2 if kind is GateKind.CX else 1
    if len(patches) != expected_patches:
        raise LogicalGateError(f"{kind.value} needs {expected_patches} patch(es)")
    for patch in patches:
        if len(patch) != code.n:
            raise LogicalGateError("patch size must match the code's data-qubit count")
    if width is None:
        width = max(q for patch in patches for q in patch) + 1
    builder = CircuitBuilder(width)
    patch = patches[0]

    if kind is GateKind.X:
        _emit_pauli(builder, patch, code.logical_x.x, code.logical_x.z)
    elif kind is GateKind.Z:
        _emit_pauli(builder, patch, code.logical_z.x, code.logical_z.z)
    elif kind is GateKind.Y:
        _emit_pauli(builder, patch, code.logical_x.x, code.logical_z.z)
    elif kind is GateKind.CX:
        for a, b in zip(patches[0], patches[1]):
            builder.add(qc.cx(a, b))
    elif kind is GateKind.H:
        for phys in patch:
            builder.add(qc.h(phys))
        if code.name is not CodeName.STEANE:
            for cycle in _rotation_cycles(code.d):
                anchor = cycle[0]
                for other in cycle[1:]:
                    _emit_swap(builder, patch[anchor], patch[other])
    elif kind is GateKind.S:
        for phys in patch:
            builder.add(qc.sdg(phys))
    elif kind is GateKind.SDG:
        for phys in patch:
            builder.add(qc.s(phys))
    else:  # pragma: no cover - guarded by the supported-set check
        raise LogicalGateError(f"unsupported logical gate {kind.value}")
    return builder.build()
