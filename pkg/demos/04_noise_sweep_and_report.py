"""
Does error correction help a noisy classifier?
==============================================

The headline experiment, shrunk to coffee-break size.  We sweep physical
error rates for the 1-qubit classifier, bare and wrapped in each code,
count the shots that still classify the class reference points correctly
(PST: probability of successful trials), and then roll the sweep up into
the two report tables:

  * accuracy under noise, via A' = A - mean per-class PST drop,
  * relative improvement (AI, percent) of each code over no protection.

The full-size version of this run backs the acceptance suite; here we trim
shots and the grid so it finishes in a couple of minutes.
"""
import tempfile
from pathlib import Path

from qecclab.harness import (
    ExperimentConfig,
    accuracy_records_from_sweep,
    improvement_report,
    overhead_report,
    run_pst_sweep,
)

out = Path(tempfile.mkdtemp()) / "pst.csv"
config = ExperimentConfig(
    classifier=1,
    codes=("None", "Steane", "D3Surface", "D5Surface"),
    modes=("D", "BPD"),
    noise_grid=(1e-3, 1e-2),
    shots=400,
    master_seed=7,
    output_path=str(out),
)

print("== PST sweep ==")
records = run_pst_sweep(config)
print(f"  {len(records)} cells -> {out}")
print(f"  {'code':<10} {'mode':<4} {'p':>6}   PST(M)  PST(C)")
by_cell = {(r.class_label, r.code, r.mode, r.p): r.pst for r in records}
for code in config.codes:
    for mode in config.modes:
        for p in config.noise_grid:
            m = by_cell[("M", code, mode, p)]
            c = by_cell[("C", code, mode, p)]
            print(f"  {code:<10} {mode:<4} {p:>6g}   {m:.3f}   {c:.3f}")

print("\n== improvement over the unprotected baseline ==")
table = improvement_report(accuracy_records_from_sweep(records, config))
print(f"  {'mode':<4} {'code':<10} {'avg accuracy %':>14} {'AI %':>6}")
for row in table:
    print(f"  {row.mode:<4} {row.code:<10} {row.aa:>14.2f} {row.ai:>6.2f}")

print("\n== what the protection costs ==")
rows, avgs = overhead_report(classifiers=(1,), master_seed=7)
print(f"  {'class':<6} {'code':<10} {'qubits':>6} {'gates':>6} {'depth':>6}")
for row in rows + avgs:
    print(f"  {row.class_label:<6} {row.code:<10} {row.qubits:>6} "
          f"{row.gate_count:>6} {row.depth:>6}")

print("\nHigher distance, higher PST, higher improvement — and a steep bill")
print("in qubits and gates.  The CLI runs the same pipeline from the shell:")
print("  qecclab sweep --config config.json")
print("  qecclab report --records pst.csv --kind improvement --format csv")
