"""qecclab: stabilizer error correction woven into small quantum classifiers.

Layers, bottom to top:
  circuits / statevector / tableau — gate model and the two simulation backends
  noise                            — Pauli error modes D, BP, BPD
  classifier / synthesis           — data, training, Clifford synthesis
  qecc                             — codes, encoders, extraction, decoding
  harness                          — sweeps, accuracy metrics, reports, CLI
"""
from . import circuits, classifier, harness, noise, qecc, sampling, statevector, synthesis, tableau

__version__ = "0.1.0"

__all__ = [
    "circuits",
    "classifier",
    "harness",
    "noise",
    "qecc",
    "sampling",
    "statevector",
    "synthesis",
    "tableau",
    "__version__",
]
