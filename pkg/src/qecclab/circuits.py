"""Circuit intermediate representation shared by both simulator backends.

A circuit is an ordered list of gates over integer-indexed qubits.  Gates
are plain data; the statevector and tableau backends interpret them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

TWO_PI = 2.0 * math.pi


class GateKind(Enum):
    H = "H"
    S = "S"
    SDG = "SDG"
    X = "X"
    Y = "Y"
    Z = "Z"
    CX = "CX"
    CZ = "CZ"
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    MEASURE_Z = "MEASUREZ"
    RESET = "RESET"


ROTATION_KINDS = frozenset({GateKind.RX, GateKind.RY, GateKind.RZ})
TWO_QUBIT_KINDS = frozenset({GateKind.CX, GateKind.CZ})
CLIFFORD_1Q_KINDS = frozenset(
    {GateKind.H, GateKind.S, GateKind.SDG, GateKind.X, GateKind.Y, GateKind.Z}
)


class CircuitError(ValueError):
    """Raised for malformed gates or circuits."""


def _reduce_angle(angle: float) -> float:
    if not math.isfinite(angle):
        raise CircuitError(f"rotation angle must be finite, got {angle!r}")
    reduced = math.fmod(angle, TWO_PI)
    if reduced < 0.0:
        reduced += TWO_PI
    return reduced


@dataclass(frozen=True)
class Gate:
    """One gate application: kind, operand qubits, optional rotation angle.

    Angles are radians, reduced to [0, 2*pi) so gate equality is
    well-defined.
    """

    kind: GateKind
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self) -> None:
        arity = 2 if self.kind in TWO_QUBIT_KINDS else 1
        if len(self.qubits) != arity:
            raise CircuitError(
                f"{self.kind.value} expects {arity} operand(s), got {self.qubits}"
            )
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise CircuitError(f"duplicate operands on {self.kind.value}: {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise CircuitError(f"negative qubit index in {self.qubits}")
        if self.kind in ROTATION_KINDS:
            if self.angle is None:
                raise CircuitError(f"{self.kind.value} requires an angle")
            object.__setattr__(self, "angle", _reduce_angle(self.angle))
        elif self.angle is not None:
            raise CircuitError(f"{self.kind.value} takes no angle")

    @property
    def is_rotation(self) -> bool:
        return self.kind in ROTATION_KINDS


# Convenience constructors, used heavily by circuit assembly code.
def h(q: int) -> Gate:
    return Gate(GateKind.H, (q,))


def s(q: int) -> Gate:
    return Gate(GateKind.S, (q,))


def sdg(q: int) -> Gate:
    return Gate(GateKind.SDG, (q,))


def x(q: int) -> Gate:
    return Gate(GateKind.X, (q,))


def y(q: int) -> Gate:
    return Gate(GateKind.Y, (q,))


def z(q: int) -> Gate:
    return Gate(GateKind.Z, (q,))


def cx(c: int, t: int) -> Gate:
    return Gate(GateKind.CX, (c, t))


def cz(a: int, b: int) -> Gate:
    return Gate(GateKind.CZ, (a, b))


def rx(angle: float, q: int) -> Gate:
    return Gate(GateKind.RX, (q,), angle)


def ry(angle: float, q: int) -> Gate:
    return Gate(GateKind.RY, (q,), angle)


def rz(angle: float, q: int) -> Gate:
    return Gate(GateKind.RZ, (q,), angle)


def measure_z(q: int) -> Gate:
    return Gate(GateKind.MEASURE_Z, (q,))


def reset(q: int) -> Gate:
    return Gate(GateKind.RESET, (q,))


@dataclass(frozen=True)
class CircuitMetrics:
    qubits: int
    gate_count: int
    depth: int


@dataclass(frozen=True)
class Circuit:
    """Immutable ordered gate list over `width` qubits.

    Each MeasureZ occupies the next classical bit in program order;
    `classical_bits` equals the number of MeasureZ gates.
    """

    width: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.width < 0:
            raise CircuitError("width must be non-negative")
        object.__setattr__(self, "gates", tuple(self.gates))
        for gate in self.gates:
            self._check_gate(gate)

    def _check_gate(self, gate: Gate) -> None:
        if any(q >= self.width for q in gate.qubits):
            raise CircuitError(
                f"operand out of range: {gate.kind.value} on {gate.qubits}, width {self.width}"
            )

    @property
    def classical_bits(self) -> int:
        return sum(1 for g in self.gates if g.kind is GateKind.MEASURE_Z)

    def append(self, gate: Gate) -> "Circuit":
        self._check_gate(gate)
        return Circuit(self.width, self.gates + (gate,))

    def __len__(self) -> int:
        return len(self.gates)


class CircuitBuilder:
    """Mutable accumulator for assembling large circuits in O(n)."""

    def __init__(self, width: int):
        if width < 0:
            raise CircuitError("width must be non-negative")
        self.width = width
        self._gates: list[Gate] = []

    def add(self, gate: Gate) -> "CircuitBuilder":
        if any(q >= self.width for q in gate.qubits):
            raise CircuitError(
                f"operand out of range: {gate.kind.value} on {gate.qubits}, width {self.width}"
            )
        self._gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> "CircuitBuilder":
        for gate in gates:
            self.add(gate)
        return self

    @property
    def gate_count(self) -> int:
        return len(self._gates)

    def build(self) -> Circuit:
        return Circuit(self.width, tuple(self._gates))


def append_gate(circuit: Circuit, gate: Gate) -> Circuit:
    """Return a new circuit with `gate` appended."""
    return circuit.append(gate)


def compose(left: Circuit, right: Circuit, qubit_map: Mapping[int, int] | None = None) -> Circuit:
    """Sequential composition: run `left`, then `right` remapped by `qubit_map`.

    `qubit_map` sends right-circuit qubit indices to output indices and must
    be injective; unmapped right qubits keep their index.  The output is
    widened if the image exceeds `left.width`.
    """
    if qubit_map is None:
        qubit_map = {}
    mapped = {q: qubit_map.get(q, q) for q in range(right.width)}
    if len(set(mapped.values())) != len(mapped):
        raise CircuitError(f"non-injective qubit map: {qubit_map}")
    width = max([left.width] + [m + 1 for m in mapped.values()]) if mapped else left.width
    gates = list(left.gates)
    for gate in right.gates:
        gates.append(Gate(gate.kind, tuple(mapped[q] for q in gate.qubits), gate.angle))
    return Circuit(width, tuple(gates))


def metrics(circuit: Circuit) -> CircuitMetrics:
    """Qubit / gate / depth counts.

    Depth uses as-soon-as-possible layering: each gate lands in the earliest
    layer where all its operands are free.  Measurement and Reset count as
    gates.
    """
    free_at = [0] * circuit.width
    depth = 0
    for gate in circuit.gates:
        layer = max(free_at[q] for q in gate.qubits) + 1
        for q in gate.qubits:
            free_at[q] = layer
        depth = max(depth, layer)
    return CircuitMetrics(qubits=circuit.width, gate_count=len(circuit.gates), depth=depth)


def is_clifford(circuit: Circuit) -> bool:
    """True iff the circuit contains no rotation gate (syntactic check)."""
    return not any(g.is_rotation for g in circuit.gates)


def to_text(circuit: Circuit) -> str:
    """Line-oriented dump: header `width N`, then one gate per line."""
    lines = [f"width {circuit.width}"]
    for gate in circuit.gates:
        parts = [gate.kind.value] + [str(q) for q in gate.qubits]
        if gate.angle is not None:
            parts.append(repr(gate.angle))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


_KIND_BY_NAME = {k.value: k for k in GateKind}


def from_text(text: str) -> Circuit:
    """Parse the format emitted by `to_text`."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("width "):
        raise CircuitError("missing 'width N' header")
    width = int(lines[0].split()[1])
    gates = []
    for ln in lines[1:]:
        parts = ln.split()
        kind = _KIND_BY_NAME.get(parts[0].upper())
        if kind is None:
            raise CircuitError(f"unknown gate kind {parts[0]!r}")
        if kind in ROTATION_KINDS:
            gates.append(Gate(kind, tuple(int(p) for p in parts[1:-1]), float(parts[-1])))
        else:
            gates.append(Gate(kind, tuple(int(p) for p in parts[1:])))
    return Circuit(width, tuple(gates))
