"""Minimum-weight lookup decoding for the CSS codes.

CSS structure lets the decoder split into two independent tables: X-type
data errors are diagnosed by the Z-generator syndrome bits and vice versa.
Tables are built breadth-first by error weight, so each syndrome maps to a
minimum-weight correction; enumeration continues past the guaranteed
radius floor((d-1)/2) until every syndrome (any combination of check bits,
as can arise from faulty extraction) has an entry.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from ..tableau import PauliString
from .codes import StabilizerCode

__all__ = ["SyndromeTable", "build_decoder", "export_decoder_csv"]


@dataclass(frozen=True)
class SyndromeTable:
    code: StabilizerCode
    # Z-check syndrome (packed int, bit t = t-th Z generator) -> X-error qubits
    x_corrections: dict
    # X-check syndrome -> Z-error qubits
    z_corrections: dict
    max_weight: int

    def correct_x_errors(self, z_check_bits: int) -> tuple[int, ...]:
        return self.x_corrections[z_check_bits]

    def correct_z_errors(self, x_check_bits: int) -> tuple[int, ...]:
        return self.z_corrections[x_check_bits]

    def lookup(self, syndrome) -> PauliString:
        """Correction for a full syndrome vector ordered by generator index."""
        code = self.code
        bits = [int(b) & 1 for b in syndrome]
        if len(bits) != code.num_generators:
            raise ValueError("syndrome length must equal the generator count")
        x_key = sum(bits[g] << t for t, g in enumerate(code.z_generator_indices))
        z_key = sum(bits[g] << t for t, g in enumerate(code.x_generator_indices))
        x = np.zeros(code.n, dtype=np.uint8)
        z = np.zeros(code.n, dtype=np.uint8)
        x[list(self.x_corrections[x_key])] = 1
        z[list(self.z_corrections[z_key])] = 1
        return PauliString(x, z)

    @property
    def covered_syndrome_count(self) -> int:
        return len(self.x_corrections) * len(self.z_corrections)


def _fill_table(n: int, qubit_masks: list[int], num_checks: int) -> dict:
    table = {0: ()}
    full = 1 << num_checks
    weight = 0
    while len(table) < full:
        weight += 1
        if weight > n:
            raise RuntimeError("check matrix does not span the syndrome space")
        for combo in combinations(range(n), weight):
            key = 0
            for q in combo:
                key ^= qubit_masks[q]
            if key not in table:
                table[key] = combo
                if len(table) == full:
                    break
    return table


@lru_cache(maxsize=None)
def build_decoder(code: StabilizerCode) -> SyndromeTable:
    x_checks = [code.stabilizer_generators[g] for g in code.x_generator_indices]
    z_checks = [code.stabilizer_generators[g] for g in code.z_generator_indices]
    # X error on qubit q flips Z-check t iff q is in that check's support
    x_err_masks = [
        sum((1 << t) for t, chk in enumerate(z_checks) if chk.z[q]) for q in range(code.n)
    ]
    z_err_masks = [
        sum((1 << t) for t, chk in enumerate(x_checks) if chk.x[q]) for q in range(code.n)
    ]
    return SyndromeTable(
        code=code,
        x_corrections=_fill_table(code.n, x_err_masks, len(z_checks)),
        z_corrections=_fill_table(code.n, z_err_masks, len(x_checks)),
        max_weight=(code.d - 1) // 2,
    )


def export_decoder_csv(table: SyndromeTable, path) -> None:
    """Audit dump: one row per single-type entry, full-length syndrome bits.

    A general syndrome decodes to the product of its pure-X-error and
    pure-Z-error rows, so the two families jointly describe the full table.
    """
    code = table.code
    m = code.num_generators

    def full_bits(packed: int, positions) -> str:
        bits = ["0"] * m
        for t, g in enumerate(positions):
            bits[g] = str((packed >> t) & 1)
        return "".join(bits)

    def label(qubits: tuple, pauli: str) -> str:
        out = ["I"] * code.n
        for q in qubits:
            out[q] = pauli
        return "".join(out)

    with open(path, "w", encoding="utf-8") as fh:
        fh.write("syndrome_bits,correction_pauli\n")
        for key in sorted(table.x_corrections):
            fh.write(
                f"{full_bits(key, code.z_generator_indices)},"
                f"{label(table.x_corrections[key], 'X')}\n"
            )
        for key in sorted(table.z_corrections):
            if key == 0:
                continue  # identity row already emitted with the X family
            fh.write(
                f"{full_bits(key, code.x_generator_indices)},"
                f"{label(table.z_corrections[key], 'Z')}\n"
            )
