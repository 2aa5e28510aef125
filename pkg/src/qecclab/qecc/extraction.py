"""Syndrome-extraction circuits (standard CSS ancilla gadgets).

Z-type generator: ancilla in |0>, CX from each support qubit into the
ancilla, measure Z.  X-type generator: ancilla in |+> (H), CX from the
ancilla onto each support qubit, H, measure Z.  Generators are extracted
sequentially in index order, so measurement outcomes land in generator
order.  Data qubits are 0..n-1; ancillas follow.
"""
from __future__ import annotations

from dataclasses import dataclass

from .. import circuits as qc
from ..circuits import Circuit, CircuitBuilder
from .codes import StabilizerCode

__all__ = [
    "AncillaPolicy",
    "one_per_generator",
    "reuse_pool",
    "syndrome_extraction_circuit",
]


@dataclass(frozen=True)
class AncillaPolicy:
    kind: str  # "one_per_generator" | "reuse_pool"
    pool_size: int | None = None

    def __post_init__(self):
        if self.kind not in ("one_per_generator", "reuse_pool"):
            raise ValueError(f"unknown ancilla policy {self.kind!r}")
        if self.kind == "reuse_pool" and (self.pool_size is None or self.pool_size < 1):
            raise ValueError("reuse pool needs size >= 1")

    def ancilla_count(self, code: StabilizerCode) -> int:
        if self.kind == "one_per_generator":
            return code.num_generators
        return min(self.pool_size, code.num_generators)


def one_per_generator() -> AncillaPolicy:
    return AncillaPolicy("one_per_generator")


def reuse_pool(size: int) -> AncillaPolicy:
    return AncillaPolicy("reuse_pool", size)


def default_policy(code: StabilizerCode) -> AncillaPolicy:
    """Policy matching the code's advertised ancilla_count."""
    if code.ancilla_count == code.num_generators:
        return one_per_generator()
    return reuse_pool(code.ancilla_count)


def syndrome_extraction_circuit(
    code: StabilizerCode, policy: AncillaPolicy | None = None
) -> Circuit:
    """One full round measuring every generator once, in generator order."""
    policy = policy if policy is not None else default_policy(code)
    n = code.n
    n_anc = policy.ancilla_count(code)
    builder = CircuitBuilder(n + n_anc)
    used = [False] * n_anc
    for g in range(code.num_generators):
        slot = g if policy.kind == "one_per_generator" else g % n_anc
        anc = n + slot
        if used[slot]:
            builder.add(qc.reset(anc))
        used[slot] = True
        schedule = code.generator_schedules[g]
        if code.generator_type(g) == "Z":
            for q in schedule:
                builder.add(qc.cx(q, anc))
        else:
            builder.add(qc.h(anc))
            for q in schedule:
                builder.add(qc.cx(anc, q))
            builder.add(qc.h(anc))
        builder.add(qc.measure_z(anc))
    return builder.build()
