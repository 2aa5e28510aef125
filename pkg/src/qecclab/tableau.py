"""Binary-symplectic stabilizer tableau simulator for Clifford circuits.

Standard destabilizer/stabilizer tableau (rows 0..n-1 destabilizers,
rows n..2n-1 stabilizers) with phase bits, stored as numpy uint8 arrays so
row updates vectorize.  Row convention: row = (-1)^r * i^{|x&z|} X^x Z^z,
i.e. positions with both bits set carry a Y.

This backend is the only one able to run the distance-5 protected circuits;
measurement phase arithmetic is vectorized over rows (see `_product_phase`).
"""
from __future__ import annotations

import numpy as np

from .circuits import Circuit, Gate, GateKind

__all__ = [
    "Tableau",
    "TableauError",
    "PauliString",
    "run_clifford_circuit",
]


class TableauError(ValueError):
    pass


class PauliString:
    """Plain (+1-phase) Pauli over n qubits as X/Z bit vectors."""

    __slots__ = ("x", "z")

    def __init__(self, x: np.ndarray, z: np.ndarray):
        self.x = np.asarray(x, dtype=np.uint8)
        self.z = np.asarray(z, dtype=np.uint8)
        if self.x.shape != self.z.shape:
            raise TableauError("x/z length mismatch")

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Build from a string like 'XIZY' (qubit 0 first)."""
        n = len(label)
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        for i, ch in enumerate(label.upper()):
            if ch == "X":
                x[i] = 1
            elif ch == "Z":
                z[i] = 1
            elif ch == "Y":
                x[i] = 1
                z[i] = 1
            elif ch != "I":
                raise TableauError(f"bad Pauli letter {ch!r}")
        return cls(x, z)

    @classmethod
    def single(cls, n: int, qubit: int, pauli: str) -> "PauliString":
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        if pauli in ("X", "Y"):
            x[qubit] = 1
        if pauli in ("Z", "Y"):
            z[qubit] = 1
        if pauli not in ("X", "Y", "Z"):
            raise TableauError(f"bad Pauli {pauli!r}")
        return cls(x, z)

    def to_label(self) -> str:
        out = []
        for xb, zb in zip(self.x, self.z):
            out.append("IXZY"[xb + 2 * zb] if xb + 2 * zb != 3 else "Y")
        return "".join(out)

    @property
    def n(self) -> int:
        return len(self.x)

    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def commutes_with(self, other: "PauliString") -> bool:
        s = int((self.x & other.z).sum()) + int((self.z & other.x).sum())
        return s % 2 == 0


class Tableau:
    """Stabilizer state of `n` qubits, initialized to |0...0>."""

    def __init__(self, num_qubits: int):
        if num_qubits < 1:
            raise TableauError("need at least one qubit")
        n = self.n = num_qubits
        self.x = np.zeros((2 * n, n), dtype=np.uint8)
        self.z = np.zeros((2 * n, n), dtype=np.uint8)
        self.r = np.zeros(2 * n, dtype=np.uint8)
        idx = np.arange(n)
        self.x[idx, idx] = 1          # destabilizers X_i
        self.z[n + idx, idx] = 1      # stabilizers Z_i

    # -- gates ---------------------------------------------------------

    def h(self, a: int) -> None:
        xa, za = self.x[:, a], self.z[:, a]
        self.r ^= xa & za
        self.x[:, a], self.z[:, a] = za.copy(), xa.copy()

    def s(self, a: int) -> None:
        xa, za = self.x[:, a], self.z[:, a]
        self.r ^= xa & za
        self.z[:, a] ^= xa

    def sdg(self, a: int) -> None:
        # Sdg = Z . S as a conjugation
        self.r ^= self.x[:, a]
        self.s(a)

    def px(self, a: int) -> None:
        self.r ^= self.z[:, a]

    def py(self, a: int) -> None:
        self.r ^= self.x[:, a] ^ self.z[:, a]

    def pz(self, a: int) -> None:
        self.r ^= self.x[:, a]

    def cx(self, a: int, b: int) -> None:
        xa, za = self.x[:, a], self.z[:, a]
        xb, zb = self.x[:, b], self.z[:, b]
        self.r ^= xa & zb & (xb ^ za ^ 1)
        self.x[:, b] ^= xa
        self.z[:, a] ^= zb

    def cz(self, a: int, b: int) -> None:
        self.h(b)
        self.cx(a, b)
        self.h(b)

    def apply_gate(self, gate: Gate, rng: np.random.Generator | None = None) -> int | None:
        """Apply one gate; returns the outcome bit for MeasureZ, else None."""
        k = gate.kind
        q = gate.qubits
        if k is GateKind.H:
            self.h(q[0])
        elif k is GateKind.S:
            self.s(q[0])
        elif k is GateKind.SDG:
            self.sdg(q[0])
        elif k is GateKind.X:
            self.px(q[0])
        elif k is GateKind.Y:
            self.py(q[0])
        elif k is GateKind.Z:
            self.pz(q[0])
        elif k is GateKind.CX:
            self.cx(q[0], q[1])
        elif k is GateKind.CZ:
            self.cz(q[0], q[1])
        elif k is GateKind.MEASURE_Z:
            outcome, _ = self.measure_z(q[0], rng)
            return outcome
        elif k is GateKind.RESET:
            self.reset(q[0])
        else:
            raise TableauError(f"non-Clifford gate in tableau backend: {k.value}")
        return None

    def apply_pauli(self, pauli: PauliString) -> None:
        """Conjugate by a Pauli: flips phases of anticommuting rows."""
        anti = (
            (self.x & pauli.z).sum(axis=1, dtype=np.int64)
            + (self.z & pauli.x).sum(axis=1, dtype=np.int64)
        ) & 1
        self.r ^= anti.astype(np.uint8)

    # -- measurement ---------------------------------------------------

    def _product_phase(self, rows: np.ndarray) -> tuple[int, np.ndarray, np.ndarray]:
        """Sign data for the ordered product of the given row indices.

        Returns (i-exponent mod 4, x, z) of the product: the product equals
        i^E X^x Z^z with E folding in each row's own (-1)^r i^y phase and
        the Z-past-X reordering signs.
        """
        if len(rows) == 0:
            return 0, np.zeros(self.n, dtype=np.uint8), np.zeros(self.n, dtype=np.uint8)
        xs = self.x[rows].astype(np.int64)
        zs = self.z[rows].astype(np.int64)
        ys = (xs & zs).sum()
        swaps = (np.cumsum(zs, axis=0)[:-1] * xs[1:]).sum() if len(rows) > 1 else 0
        e = int(2 * self.r[rows].sum() + ys + 2 * swaps) % 4
        x = np.bitwise_xor.reduce(self.x[rows], axis=0)
        z = np.bitwise_xor.reduce(self.z[rows], axis=0)
        return e, x, z

    def _rowsum_from_pivot(self, targets: np.ndarray, p: int) -> None:
        """row_t <- row_t * row_p for each target row, vectorized."""
        if len(targets) == 0:
            return
        xt = self.x[targets]
        zt = self.z[targets]
        xp = self.x[p]
        zp = self.z[p]
        yt = (xt & zt).sum(axis=1, dtype=np.int64)
        yp = int((xp & zp).sum())
        swaps = (zt & xp).sum(axis=1, dtype=np.int64)
        e = 2 * self.r[targets].astype(np.int64) + yt + 2 * int(self.r[p]) + yp + 2 * swaps
        new_x = xt ^ xp
        new_z = zt ^ zp
        y_new = (new_x & new_z).sum(axis=1, dtype=np.int64)
        # (e - y_new) is even whenever target and pivot commute; destabilizer
        # rows may violate that, but their phases are never read.
        self.r[targets] = (((e - y_new) >> 1) & 1).astype(np.uint8)
        self.x[targets] = new_x
        self.z[targets] = new_z

    def _measure(
        self,
        px: np.ndarray,
        pz: np.ndarray,
        rng: np.random.Generator | None,
        forced: int | None,
        anti: np.ndarray | None = None,
    ) -> tuple[int, bool]:
        n = self.n
        if anti is None:
            anti = (
                (self.x & pz).sum(axis=1, dtype=np.int64)
                + (self.z & px).sum(axis=1, dtype=np.int64)
            ) & 1
        stab_anti = np.flatnonzero(anti[n:])
        if len(stab_anti) > 0:
            p = n + int(stab_anti[0])
            targets = np.flatnonzero(anti)
            targets = targets[targets != p]
            self._rowsum_from_pivot(targets, p)
            # old pivot becomes the destabilizer partner
            self.x[p - n] = self.x[p]
            self.z[p - n] = self.z[p]
            self.r[p - n] = self.r[p]
            if forced is not None:
                outcome = int(forced)
            else:
                if rng is None:
                    raise TableauError("random measurement needs an rng")
                outcome = int(rng.integers(0, 2))
            self.x[p] = px
            self.z[p] = pz
            self.r[p] = outcome
            return outcome, False
        # deterministic: product of stabilizer partners of anticommuting
        # destabilizers equals +-P
        rows = np.flatnonzero(anti[:n]) + n
        e, x, z = self._product_phase(rows)
        y = int((px & pz).sum())
        # product = i^e X^x Z^z must equal (-1)^outcome i^y X^px Z^pz
        if not (np.array_equal(x, px) and np.array_equal(z, pz)):
            raise TableauError("measured Pauli not in +-stabilizer group")
        outcome = ((e - y) >> 1) & 1
        return int(outcome), True

    def measure_z(
        self,
        qubit: int,
        rng: np.random.Generator | None = None,
        forced: int | None = None,
    ) -> tuple[int, bool]:
        """Measure Z on `qubit`; returns (outcome, deterministic flag)."""
        px = np.zeros(self.n, dtype=np.uint8)
        pz = np.zeros(self.n, dtype=np.uint8)
        pz[qubit] = 1
        # a row anticommutes with Z_q exactly when its X bit at q is set
        return self._measure(px, pz, rng, forced, anti=self.x[:, qubit])

    def measure_pauli(
        self,
        pauli: PauliString,
        rng: np.random.Generator | None = None,
        forced: int | None = None,
    ) -> tuple[int, bool]:
        """Measure an arbitrary Pauli observable (+1-phase convention)."""
        return self._measure(
            pauli.x.astype(np.uint8), pauli.z.astype(np.uint8), rng, forced
        )

    def reset(self, qubit: int, rng: np.random.Generator | None = None) -> None:
        """Measure-then-flip reset to |0>."""
        outcome, _ = self.measure_z(qubit, rng)
        if outcome:
            self.px(qubit)

    # -- diagnostics ----------------------------------------------------

    def copy(self) -> "Tableau":
        out = Tableau.__new__(Tableau)
        out.n = self.n
        out.x = self.x.copy()
        out.z = self.z.copy()
        out.r = self.r.copy()
        return out

    def stabilizer_row(self, i: int) -> tuple[int, PauliString]:
        """(sign bit, Pauli) of stabilizer generator i."""
        n = self.n
        return int(self.r[n + i]), PauliString(self.x[n + i].copy(), self.z[n + i].copy())

    def check_symplectic(self) -> bool:
        """Rows form a symplectic basis: destab i anticommutes exactly with stab i."""
        n = self.n
        xi = self.x.astype(np.int64)
        zi = self.z.astype(np.int64)
        prod = (xi @ zi.T + zi @ xi.T) % 2
        expected = np.zeros((2 * n, 2 * n), dtype=np.int64)
        idx = np.arange(n)
        expected[idx, idx + n] = 1
        expected[idx + n, idx] = 1
        return bool(np.array_equal(prod, expected))


def tableau_init(num_qubits: int) -> Tableau:
    return Tableau(num_qubits)


def run_clifford_circuit(
    circuit: Circuit,
    faults=None,
    rng: np.random.Generator | None = None,
    tableau: Tableau | None = None,
) -> list[int]:
    """Run a Clifford circuit, injecting Pauli faults, and collect outcomes.

    `faults` is an iterable with attributes (location, qubit, pauli) — see
    qecclab.noise.FaultRealization.  Faults at unitary-gate locations are
    applied immediately after the gate; faults at MeasureZ/Reset locations
    are applied immediately before (pre-measurement flips).  Returns the
    MeasureZ outcome bits in program order.
    """
    tab = tableau if tableau is not None else Tableau(max(circuit.width, 1))
    by_location: dict[int, list] = {}
    for f in faults or ():
        if not 0 <= f.location < len(circuit.gates):
            raise TableauError(f"fault location {f.location} out of range")
        by_location.setdefault(f.location, []).append(f)
    record: list[int] = []
    for loc, gate in enumerate(circuit.gates):
        pre = gate.kind in (GateKind.MEASURE_Z, GateKind.RESET)
        here = by_location.get(loc, ())
        if pre:
            for f in here:
                tab.apply_pauli(PauliString.single(tab.n, f.qubit, f.pauli))
        outcome = tab.apply_gate(gate, rng)
        if outcome is not None:
            record.append(outcome)
        if not pre:
            for f in here:
                tab.apply_pauli(PauliString.single(tab.n, f.qubit, f.pauli))
    return record
