"""
What a code distance buys you
=============================

Wrap a one-qubit logical circuit (just an X gate, so the right answer is
always "1") in each of the three supported codes, kick individual physical
qubits with Pauli errors, and watch the decoder put things right.

The rule of thumb: a distance-d code corrects any error touching at most
floor((d-1)/2) qubits.  Steane and the d=3 surface code fix any single-qubit
error; the d=5 surface code also fixes any pair.
"""
import numpy as np

from qecclab import circuits as qc
from qecclab.circuits import Circuit
from qecclab.qecc import (
    CodeName,
    assemble_protected_circuit,
    build_code,
    decode_and_readout,
)
from qecclab.tableau import PauliString, Tableau


def run_with_faults(plan, faults):
    """Simulate the protected circuit, injecting Paulis right after the
    first logical layer (between its gates and the syndrome measurements)."""
    ancillas = set(plan.patches[0].ancillas)
    inject_at = next(i for i, g in enumerate(plan.total.gates)
                     if any(q in ancillas for q in g.qubits))
    tab = Tableau(plan.total.width)
    rng = np.random.default_rng(0)
    record = []
    for i, gate in enumerate(plan.total.gates):
        if i == inject_at:
            for qubit, pauli in faults:
                tab.apply_pauli(PauliString.single(plan.total.width, qubit, pauli))
        out = tab.apply_gate(gate, rng)
        if out is not None:
            record.append(out)
    return decode_and_readout(plan, record)


logical = Circuit(1, (qc.x(0),))

for kind in (CodeName.STEANE, CodeName.D3_SURFACE, CodeName.D5_SURFACE):
    code = build_code(kind)
    plan = assemble_protected_circuit(logical, code, rounds_per_layer=1)
    print(f"== {kind.value}: [[{code.n},1,{code.d}]], "
          f"{plan.total.width} physical qubits including ancillas ==")

    # every single-qubit Pauli on every data qubit
    bad = sum(
        run_with_faults(plan, [(q, p)]) != "1"
        for q in range(code.n) for p in "XYZ"
    )
    print(f"  weight-1 errors: {code.n * 3} injected, {bad} uncorrected")

    # a sample of two-qubit errors (exhaustive for d=5 is in the test suite)
    rng = np.random.default_rng(11)
    trials, failures = 60, 0
    for _ in range(trials):
        qa, qb = rng.choice(code.n, size=2, replace=False)
        pa, pb = rng.choice(list("XYZ"), size=2)
        if run_with_faults(plan, [(int(qa), pa), (int(qb), pb)]) != "1":
            failures += 1
    verdict = "all corrected" if failures == 0 else f"{failures} logical errors"
    print(f"  weight-2 sample:  {trials} injected, {verdict}")
    print()

print("Distance 3 stumbles on some weight-2 errors; distance 5 shrugs them off.")
print("That gap is exactly what the noise sweeps in demo 04 measure at scale.")
