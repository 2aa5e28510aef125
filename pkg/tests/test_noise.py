import math

import numpy as np
import pytest

from qecclab import circuits as qc
from qecclab.circuits import Circuit
from qecclab.noise import (
    ErrorMode,
    NoiseModel,
    expected_fault_count,
    fault_locations,
    sample_faults,
)


def chain_circuit(n_gates):
    return Circuit(1, tuple(qc.h(0) for _ in range(n_gates)))


def test_fault_locations_per_operand():
    circ = Circuit(3, (qc.h(0), qc.cx(0, 1), qc.measure_z(2)))
    assert fault_locations(circ) == [(0, 0), (1, 0), (1, 1), (2, 2)]


def test_invalid_probability():
    with pytest.raises(ValueError):
        NoiseModel(ErrorMode.D, -0.1)
    with pytest.raises(ValueError):
        NoiseModel(ErrorMode.BP, 1.5)


def test_p_zero_yields_no_faults():
    rng = np.random.default_rng(0)
    circ = chain_circuit(50)
    for mode in ErrorMode:
        assert sample_faults(circ, NoiseModel(mode, 0.0), rng) == []


def test_bp_p_one_forces_y_everywhere():
    rng = np.random.default_rng(1)
    circ = chain_circuit(10)
    faults = sample_faults(circ, NoiseModel(ErrorMode.BP, 1.0), rng)
    assert len(faults) == 10
    assert all(f.pauli == "Y" for f in faults)


def test_bpd_p_one_can_cancel():
    # at p=1 each of X, Y(=XZ combined draw), Z channels fires; products can
    # cancel to identity so some locations may emit nothing, but any fault
    # emitted must be a genuine Pauli.
    rng = np.random.default_rng(2)
    circ = chain_circuit(200)
    faults = sample_faults(circ, NoiseModel(ErrorMode.BPD, 1.0), rng)
    assert all(f.pauli in ("X", "Y", "Z") for f in faults)


def test_depolarizing_mean_fault_count():
    rng = np.random.default_rng(3)
    circ = chain_circuit(100)
    model = NoiseModel(ErrorMode.D, 0.01)
    trials = 4000
    total = sum(len(sample_faults(circ, model, rng)) for _ in range(trials))
    mean = total / trials
    # binomial(100, 0.01): sd of the sample mean ~ sqrt(0.99)/sqrt(trials)
    assert abs(mean - 1.0) < 0.1


@pytest.mark.parametrize("mode", list(ErrorMode))
@pytest.mark.parametrize("p", [0.003, 0.05, 0.3])
def test_expected_fault_count_matches_monte_carlo(mode, p):
    rng = np.random.default_rng(hash((mode.value, p)) % 2**32)
    circ = chain_circuit(60)
    model = NoiseModel(mode, p)
    trials = 3000
    total = sum(len(sample_faults(circ, model, rng)) for _ in range(trials))
    mean = total / trials
    predicted = expected_fault_count(circ, model)
    # per-location fault indicator is Bernoulli; bound sd of the sample mean
    n_loc = len(fault_locations(circ))
    sd = math.sqrt(n_loc * 0.25 / trials)
    assert abs(mean - predicted) < 5 * sd + 0.02


def test_depolarizing_pauli_balance():
    rng = np.random.default_rng(7)
    circ = chain_circuit(30)
    model = NoiseModel(ErrorMode.D, 0.5)
    counts = {"X": 0, "Y": 0, "Z": 0}
    trials = 2000
    for _ in range(trials):
        for f in sample_faults(circ, model, rng):
            counts[f.pauli] += 1
    total = sum(counts.values())
    for pauli in "XYZ":
        assert abs(counts[pauli] / total - 1 / 3) < 0.02


def test_bp_marginals():
    # at a BP location: P(X)=p(1-p), P(Z)=p(1-p), P(Y)=p^2
    rng = np.random.default_rng(9)
    circ = chain_circuit(1)
    p = 0.3
    model = NoiseModel(ErrorMode.BP, p)
    counts = {"X": 0, "Y": 0, "Z": 0, None: 0}
    trials = 40000
    for _ in range(trials):
        faults = sample_faults(circ, model, rng)
        counts[faults[0].pauli if faults else None] += 1
    sd = 3 * math.sqrt(0.25 / trials)
    assert abs(counts["X"] / trials - p * (1 - p)) < sd
    assert abs(counts["Z"] / trials - p * (1 - p)) < sd
    assert abs(counts["Y"] / trials - p * p) < sd


def test_mode_ordering_of_fault_mass():
    circ = chain_circuit(40)
    for p in (1e-3, 1e-2, 0.1):
        e_d = expected_fault_count(circ, NoiseModel(ErrorMode.D, p))
        e_bp = expected_fault_count(circ, NoiseModel(ErrorMode.BP, p))
        e_bpd = expected_fault_count(circ, NoiseModel(ErrorMode.BPD, p))
        assert e_d < e_bp <= e_bpd + 1e-12


def test_fixed_seed_determinism():
    circ = Circuit(2, (qc.h(0), qc.cx(0, 1), qc.measure_z(0), qc.measure_z(1)))
    model = NoiseModel(ErrorMode.BPD, 0.2)
    a = [sample_faults(circ, model, np.random.default_rng(42)) for _ in range(3)]
    assert a[0] == a[1] == a[2]


def test_faults_reference_valid_locations():
    rng = np.random.default_rng(13)
    circ = Circuit(3, (qc.h(0), qc.cx(1, 2), qc.measure_z(0),
                       qc.reset(1), qc.measure_z(2)))
    locs = set(fault_locations(circ))
    for _ in range(200):
        for f in sample_faults(circ, NoiseModel(ErrorMode.D, 0.3), rng):
            assert (f.location, f.qubit) in locs
