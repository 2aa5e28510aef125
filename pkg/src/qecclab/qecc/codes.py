"""Definitions of the three stabilizer codes used by the toolkit.

All codes are CSS with one logical qubit.  Generators are stored X-type
first, then Z-type; syndrome bits follow the same order everywhere.
Each generator carries an explicit qubit schedule: the order in which
syndrome-extraction CNOTs touch its support.  For the weight-4 surface
plaquettes the schedule is chosen so that a single ancilla fault
propagating onto the last two data qubits produces an error pair aligned
*against* the corresponding logical operator (horizontal pairs for X
plaquettes, vertical pairs for Z plaquettes), keeping such hook errors
correctable by the lookup decoder.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from ..tableau import PauliString

__all__ = ["CodeName", "StabilizerCode", "build_code", "in_stabilizer_group"]


class CodeName(str, Enum):
    STEANE = "Steane"
    D3_SURFACE = "D3Surface"
    D5_SURFACE = "D5Surface"


@dataclass(frozen=True)
class StabilizerCode:
    name: CodeName
    n: int
    k: int
    d: int
    stabilizer_generators: tuple[PauliString, ...]
    logical_x: PauliString
    logical_z: PauliString
    ancilla_count: int
    x_generator_indices: tuple[int, ...]
    z_generator_indices: tuple[int, ...]
    # CNOT touch order of each generator's support, by generator index
    generator_schedules: tuple[tuple[int, ...], ...]

    @property
    def num_generators(self) -> int:
        return len(self.stabilizer_generators)

    def generator_type(self, index: int) -> str:
        return "X" if index in self.x_generator_indices else "Z"


def _pauli_on(n: int, qubits, pauli: str) -> PauliString:
    x = np.zeros(n, dtype=np.uint8)
    z = np.zeros(n, dtype=np.uint8)
    for q in qubits:
        if pauli in ("X", "Y"):
            x[q] = 1
        if pauli in ("Z", "Y"):
            z[q] = 1
    return PauliString(x, z)


_STEANE_SUPPORTS = ((0, 2, 4, 6), (1, 2, 5, 6), (3, 4, 5, 6))


def _build_steane() -> StabilizerCode:
    n = 7
    gens = [_pauli_on(n, s, "X") for s in _STEANE_SUPPORTS]
    gens += [_pauli_on(n, s, "Z") for s in _STEANE_SUPPORTS]
    schedules = tuple(tuple(s) for s in _STEANE_SUPPORTS) * 2
    return StabilizerCode(
        name=CodeName.STEANE,
        n=n,
        k=1,
        d=3,
        stabilizer_generators=tuple(gens),
        logical_x=_pauli_on(n, (0, 1, 2), "X"),
        logical_z=_pauli_on(n, (0, 1, 2), "Z"),
        ancilla_count=3,
        x_generator_indices=(0, 1, 2),
        z_generator_indices=(3, 4, 5),
        generator_schedules=schedules,
    )


def _surface_faces(d: int):
    """Yield (is_x_type, cells) for each plaquette of the rotated layout.

    Faces live on an (d+1) x (d+1) grid of corners; face (i, j) touches the
    data cells in rows {i-1, i} and columns {j-1, j} that fall on the d x d
    data grid.  Interior faces have weight 4; boundary faces keep only the
    two-cell ones whose type matches the boundary (X on top/bottom rows,
    Z on left/right columns).
    """
    for i in range(d + 1):
        for j in range(d + 1):
            rows = [r for r in (i - 1, i) if 0 <= r < d]
            cols = [c for c in (j - 1, j) if 0 <= c < d]
            cells = [(r, c) for r in rows for c in cols]
            is_x = (i + j) % 2 == 0
            if len(cells) < 2:
                continue
            if len(cells) == 2:
                if i in (0, d) and not is_x:
                    continue
                if j in (0, d) and is_x:
                    continue
            yield is_x, i, j, cells


def _surface_schedule(is_x: bool, i: int, j: int, cells) -> tuple[int, ...]:
    """Hook-aware CNOT order; see module docstring."""
    d_cells = {cell: True for cell in cells}
    if len(cells) == 4:
        if is_x:
            # finish on the horizontal pair in row i-1
            order = [(i, j - 1), (i, j), (i - 1, j - 1), (i - 1, j)]
        else:
            # finish on the vertical pair in column j-1
            order = [(i - 1, j), (i, j), (i - 1, j - 1), (i, j - 1)]
        assert all(c in d_cells for c in order)
        return tuple(order)
    return tuple(sorted(cells))


def _build_surface(d: int, name: CodeName) -> StabilizerCode:
    n = d * d

    def q(cell) -> int:
        r, c = cell
        return r * d + c

    x_gens: list[PauliString] = []
    z_gens: list[PauliString] = []
    x_schedules: list[tuple[int, ...]] = []
    z_schedules: list[tuple[int, ...]] = []
    for is_x, i, j, cells in _surface_faces(d):
        schedule = tuple(q(c) for c in _surface_schedule(is_x, i, j, cells))
        op = _pauli_on(n, schedule, "X" if is_x else "Z")
        if is_x:
            x_gens.append(op)
            x_schedules.append(schedule)
        else:
            z_gens.append(op)
            z_schedules.append(schedule)
    gens = tuple(x_gens + z_gens)
    n_x = len(x_gens)
    return StabilizerCode(
        name=name,
        n=n,
        k=1,
        d=d,
        stabilizer_generators=gens,
        logical_x=_pauli_on(n, [r * d for r in range(d)], "X"),   # column 0
        logical_z=_pauli_on(n, list(range(d)), "Z"),              # row 0
        ancilla_count=len(gens),
        x_generator_indices=tuple(range(n_x)),
        z_generator_indices=tuple(range(n_x, len(gens))),
        generator_schedules=tuple(x_schedules + z_schedules),
    )


@lru_cache(maxsize=None)
def build_code(kind: CodeName | str) -> StabilizerCode:
    kind = CodeName(kind)
    if kind is CodeName.STEANE:
        code = _build_steane()
    elif kind is CodeName.D3_SURFACE:
        code = _build_surface(3, kind)
    else:
        code = _build_surface(5, kind)
    _validate(code)
    return code


def _validate(code: StabilizerCode) -> None:
    gens = code.stabilizer_generators
    if len(gens) != code.n - code.k:
        raise ValueError("generator count must be n - k")
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            if not a.commutes_with(b):
                raise ValueError("stabilizer generators must commute")
        if not code.logical_x.commutes_with(a) or not code.logical_z.commutes_with(a):
            raise ValueError("logical operators must commute with generators")
    if code.logical_x.commutes_with(code.logical_z):
        raise ValueError("logical X and Z must anticommute")
    for gen, sched in zip(gens, code.generator_schedules):
        if sorted(sched) != sorted(np.flatnonzero(gen.x | gen.z).tolist()):
            raise ValueError("schedule must enumerate the generator support")


def _gf2_rank(mat: np.ndarray) -> int:
    m = mat.copy().astype(np.uint8)
    rank = 0
    rows, cols = m.shape
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, col]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        eliminate = np.flatnonzero(m[:, col])
        eliminate = eliminate[eliminate != rank]
        m[eliminate] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def in_stabilizer_group(code: StabilizerCode, pauli: PauliString) -> bool:
    """GF(2) membership of a (sign-ignored) Pauli in the stabilizer group."""
    gen_rows = np.array(
        [np.concatenate([g.x, g.z]) for g in code.stabilizer_generators],
        dtype=np.uint8,
    )
    target = np.concatenate([pauli.x, pauli.z]).astype(np.uint8)[None, :]
    base = _gf2_rank(gen_rows)
    return _gf2_rank(np.vstack([gen_rows, target])) == base
