"""
Two simulators, one answer
==========================

qecclab carries two circuit backends.  The statevector backend tracks all
2^n amplitudes and works for any unitary, which makes it the ground truth
for small circuits.  The tableau backend tracks stabilizer generators in a
binary-symplectic table, which restricts it to Clifford circuits but scales
polynomially — that is what lets us simulate distance-5 surface-code patches
later on.  This demo shows they agree.
"""
import numpy as np

from qecclab import circuits as qc
from qecclab.circuits import Circuit
from qecclab.sampling import (
    exact_outcome_distribution,
    sample_outcome_counts,
    total_variation_distance,
)
from qecclab.statevector import outcome_distribution, run_circuit

# A GHZ-style circuit: H spreads superposition, the CX ladder entangles.
ghz = Circuit(3, (qc.h(0), qc.cx(0, 1), qc.cx(1, 2)))

print("== statevector backend ==")
state = run_circuit(ghz)
exact = outcome_distribution(state)
for bits, prob in sorted(exact.items()):
    print(f"  P({bits}) = {prob:.4f}")

print("\n== tableau backend, exact branch enumeration ==")
measured = Circuit(3, ghz.gates + tuple(qc.measure_z(q) for q in range(3)))
tableau_exact = exact_outcome_distribution(measured)
for bits, prob in sorted(tableau_exact.items()):
    print(f"  P({bits}) = {prob:.4f}")

print("\nTVD between the two exact distributions:",
      f"{total_variation_distance(exact, tableau_exact):.2e}")

print("\n== tableau backend, 100k sampled shots ==")
rng = np.random.default_rng(7)
counts = sample_outcome_counts(measured, 100_000, rng)
freq = {k: v / 100_000 for k, v in counts.items()}
for bits, prob in sorted(freq.items()):
    print(f"  f({bits}) = {prob:.4f}")
print("TVD sampled vs exact:",
      f"{total_variation_distance(freq, exact):.4f}  (shrinks like 1/sqrt(shots))")

# The same agreement holds for any Clifford circuit; the acceptance suite
# checks 100 random ones.  Only the tableau backend survives what comes
# next: protected circuits with 50+ physical qubits.
