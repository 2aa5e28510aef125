"""Pauli error modes and Monte Carlo fault sampling.

Three error modes:
  D   — depolarizing: each fault location independently suffers one Pauli
        drawn uniformly from {X, Y, Z} with probability p.
  BP  — bit/phase flips: at each location X fires with probability p and,
        independently, Z fires with probability p; both firing realizes Y.
  BPD — the independent union of the BP and D processes at each location.

A fault location is one (gate, operand qubit) pair; every gate contributes
one location per operand, including MeasureZ and Reset (pre-measurement
flips).  Idle qubits carry no locations.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .circuits import Circuit


class ErrorMode(Enum):
    D = "D"
    BP = "BP"
    BPD = "BPD"


@dataclass(frozen=True)
class NoiseModel:
    mode: ErrorMode
    p: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"physical error probability out of range: {self.p}")


@dataclass(frozen=True)
class FaultRealization:
    location: int  # gate index within the circuit
    qubit: int
    pauli: str  # 'X', 'Y' or 'Z'


def fault_locations(circuit: Circuit) -> list[tuple[int, int]]:
    """All (gate index, qubit) fault locations of a circuit, in order."""
    return [(i, q) for i, g in enumerate(circuit.gates) for q in g.qubits]


_PAULI_MUL = {  # product table modulo phase, for combining BP and D draws
    ("X", "X"): None, ("Y", "Y"): None, ("Z", "Z"): None,
    ("X", "Y"): "Z", ("Y", "X"): "Z",
    ("X", "Z"): "Y", ("Z", "X"): "Y",
    ("Y", "Z"): "X", ("Z", "Y"): "X",
}


def _combine(a: str | None, b: str | None) -> str | None:
    if a is None:
        return b
    if b is None:
        return a
    return _PAULI_MUL[(a, b)]


def sample_site_paulis(
    n_sites: int, model: NoiseModel, rng: np.random.Generator
) -> list[tuple[int, str]]:
    """Draw the per-location error process over `n_sites` abstract sites.

    Returns (site index, Pauli) pairs ordered by site, applying the same
    mode semantics as `sample_faults`: coinciding X and Z draws (modes
    BP/BPD) and the union of the BP and D processes (BPD) combine as
    Pauli products; a site whose product cancels to identity is omitted.
    """
    if n_sites == 0 or model.p == 0.0:
        return []
    p = model.p
    out: list[tuple[int, str]] = []
    dep = None
    flips_x = flips_z = None
    if model.mode in (ErrorMode.D, ErrorMode.BPD):
        fire = rng.random(n_sites) < p
        which = rng.integers(0, 3, size=n_sites)  # 0..2 -> X, Y, Z
        dep = np.where(fire, which + 1, 0)  # 0 means no depolarizing fault
    if model.mode in (ErrorMode.BP, ErrorMode.BPD):
        flips_x = rng.random(n_sites) < p
        flips_z = rng.random(n_sites) < p
    code_to_pauli = {1: "X", 2: "Y", 3: "Z"}
    for i in range(n_sites):
        pauli: str | None = None
        if flips_x is not None:
            if flips_x[i]:
                pauli = _combine(pauli, "X")
            if flips_z[i]:
                pauli = _combine(pauli, "Z")
        if dep is not None and dep[i]:
            pauli = _combine(pauli, code_to_pauli[int(dep[i])])
        if pauli is not None:
            out.append((i, pauli))
    return out


def sample_faults(
    circuit: Circuit, model: NoiseModel, rng: np.random.Generator
) -> list[FaultRealization]:
    """Draw one fault realization for the circuit, ordered by location.

    Coinciding X and Z draws at one location (modes BP/BPD) and the union
    of the BP and D processes (BPD) combine as Pauli products; a location
    whose product cancels to identity yields no fault.
    """
    locations = fault_locations(circuit)
    return [
        FaultRealization(locations[i][0], locations[i][1], pauli)
        for i, pauli in sample_site_paulis(len(locations), model, rng)
    ]


def expected_fault_count(circuit: Circuit, model: NoiseModel) -> float:
    """Expected number of locations with at least one surviving fault.

    D: L*p.  BP: L*(2p - p^2) counting locations where X or Z fires (the
    X=Z coincidence is a Y, still one fault).  BPD: union of both
    processes; a location is fault-free when nothing fires, plus the
    measure-zero cancellations where the BP product equals the
    depolarizing Pauli.
    """
    L = len(fault_locations(circuit))
    p = model.p
    if model.mode is ErrorMode.D:
        return L * p
    if model.mode is ErrorMode.BP:
        return L * (2 * p - p * p)
    # BPD: no-fault outcomes per location:
    #   nothing fires: (1-p)^2 * (1-p)
    #   exact cancellation: BP product equals the depolarizing Pauli:
    #     X only & dep=X, Z only & dep=Z, X+Z (=Y) & dep=Y, each prob/3
    none = (1 - p) ** 3
    cancel = (p * (1 - p) * 2 + p * p) * (p / 3)
    return L * (1.0 - none - cancel)


def location_no_fault_probability(model: NoiseModel) -> float:
    """Probability that a single location yields no net fault."""
    p = model.p
    if model.mode is ErrorMode.D:
        return 1.0 - p
    if model.mode is ErrorMode.BP:
        return (1 - p) ** 2
    return (1 - p) ** 3 + (p * (1 - p) * 2 + p * p) * (p / 3)


def no_fault_probability(circuit: Circuit, model: NoiseModel) -> float:
    """Probability that a whole shot executes with no net fault anywhere."""
    return location_no_fault_probability(model) ** len(fault_locations(circuit))
