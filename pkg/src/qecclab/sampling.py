"""Outcome-distribution utilities for the tableau backend.

A Clifford circuit's measurement record is determined by its random
measurement outcomes, each an unbiased coin.  Enumerating those branches
once gives the exact record distribution; sampling then reduces to a
multinomial draw.  Only practical for circuits with few random
measurements (the cross-backend checks cap at 4).
"""
from __future__ import annotations

import numpy as np

from .circuits import Circuit, GateKind
from .tableau import Tableau, TableauError


def exact_outcome_distribution(
    circuit: Circuit, max_branches: int = 4096
) -> dict[str, float]:
    """Exact probability of each measurement record of a Clifford circuit."""
    results: dict[str, float] = {}

    def walk(tab: Tableau, gate_idx: int, bits: list[int], prob: float) -> None:
        for i in range(gate_idx, len(circuit.gates)):
            gate = circuit.gates[i]
            if gate.kind in (GateKind.MEASURE_Z, GateKind.RESET):
                q = gate.qubits[0]
                snapshot = tab.copy()
                outcome, deterministic = tab.measure_z(q, forced=0)
                if deterministic:
                    if gate.kind is GateKind.MEASURE_Z:
                        bits.append(outcome)
                    elif outcome:
                        tab.px(q)
                    continue
                if len(results) + 2 > max_branches:
                    raise TableauError("too many random-measurement branches")
                # branch 1 on the snapshot
                other = snapshot
                other.measure_z(q, forced=1)
                for branch_tab, bit in ((tab, 0), (other, 1)):
                    branch_bits = list(bits)
                    if gate.kind is GateKind.MEASURE_Z:
                        branch_bits.append(bit)
                    elif bit:
                        branch_tab.px(q)
                    walk(branch_tab, i + 1, branch_bits, prob * 0.5)
                return
            tab.apply_gate(gate)
        key = "".join(map(str, bits))
        results[key] = results.get(key, 0.0) + prob

    walk(Tableau(max(circuit.width, 1)), 0, [], 1.0)
    return results


def sample_outcome_counts(
    circuit: Circuit, shots: int, rng: np.random.Generator
) -> dict[str, int]:
    """Sample measurement records; branch-deduplicated per-shot simulation."""
    dist = exact_outcome_distribution(circuit)
    keys = sorted(dist)
    draws = rng.multinomial(shots, [dist[k] for k in keys])
    return {k: int(c) for k, c in zip(keys, draws) if c > 0}


def total_variation_distance(p: dict[str, float], q: dict[str, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)
