"""Synthetic datasets, amplitude encoding, and the 1-/2-qubit classifiers.

Dataset recipes (the generative models are this toolkit's own — only the
sizes and class structure are fixed externally):

* 2D, classes M/C: a point's angle phi is drawn from Normal(mu_class,
  sigma) most of the time, and from the *other* class's Gaussian with a
  small contamination probability; features are (cos phi, sin phi) with
  phi clipped to the first quadrant.  The contamination sets the Bayes
  accuracy (~0.93) while keeping the class bulks tightly clustered, so a
  discrete-gate resynthesis of the classifier loses very little accuracy.
* 4D, classes R/B/G/Y: class prototypes are the four computational-basis
  amplitude vectors (G and Y sit on |11> and |10> respectively so the
  classifier's CX maps them onto the fixed label order 00,01,10,11),
  mixed toward the common centroid, plus non-negative-clipped Gaussian
  noise and the same label contamination (Bayes ~0.86).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import circuits as qc
from .circuits import Circuit, CircuitBuilder
from .statevector import circuit_unitary

__all__ = [
    "DataPoint",
    "Dataset",
    "ClassifierParams",
    "TrainReport",
    "generate_dataset",
    "amplitude_encode",
    "classifier_circuit",
    "classifier_unitary",
    "outcome_probabilities",
    "predict",
    "train",
    "pca_project",
    "labels_for_dimensionality",
    "dataset_to_csv",
    "dataset_from_csv",
    "fold_indices",
    "class_reference_points",
]

LABELS_2D = ("M", "C")
LABELS_4D = ("R", "B", "G", "Y")

# 2D recipe: bulk centers far apart inside the first quadrant, tight spread
_MU_2D = {"M": 0.16, "C": 1.42}
_SIGMA_2D = 0.10
_CONTAMINATION_2D = 0.07

# 4D recipe: clusters are kept tight around the prototype basis states so the
# composite circuits stay near the Clifford manifold; label contamination
# carries the irreducible error instead of cluster overlap
_MIX_4D = 0.05
_SIGMA_4D = 0.02
_CONTAMINATION_4D = 0.14
_PROTOTYPE_INDEX = {"R": 0, "B": 1, "G": 3, "Y": 2}


@dataclass(frozen=True)
class DataPoint:
    features: tuple
    label: str

    def __post_init__(self):
        norm = math.sqrt(sum(f * f for f in self.features))
        if abs(norm - 1.0) > 1e-10:
            raise ValueError("features must be unit-norm")
        if any(f < 0 for f in self.features):
            raise ValueError("features must be non-negative")


@dataclass(frozen=True)
class Dataset:
    points: tuple
    dimensionality: int
    seed: int

    @property
    def feature_matrix(self) -> np.ndarray:
        return np.array([p.features for p in self.points], dtype=np.float64)

    @property
    def label_indices(self) -> np.ndarray:
        labels = labels_for_dimensionality(self.dimensionality)
        return np.array([labels.index(p.label) for p in self.points], dtype=np.int64)


@dataclass(frozen=True)
class ClassifierParams:
    thetas: tuple

    def __post_init__(self):
        if len(self.thetas) not in (2, 4):
            raise ValueError("1-qubit needs 2 thetas, 2-qubit needs 4")
        if not all(math.isfinite(t) for t in self.thetas):
            raise ValueError("thetas must be finite")

    @property
    def arity(self) -> int:
        return 1 if len(self.thetas) == 2 else 2


@dataclass(frozen=True)
class TrainReport:
    params: ClassifierParams
    train_accuracy: float
    test_accuracy: float
    fold_accuracies: tuple


def labels_for_dimensionality(dim: int) -> tuple:
    if dim == 2:
        return LABELS_2D
    if dim == 4:
        return LABELS_4D
    raise ValueError("dimensionality must be 2 or 4")


def generate_dataset(dimensionality: int, seed: int) -> Dataset:
    labels = labels_for_dimensionality(dimensionality)
    rng = np.random.default_rng(seed)
    per_class = 1024
    points = []
    if dimensionality == 2:
        for label in labels:
            other = "C" if label == "M" else "M"
            contaminated = rng.random(per_class) < _CONTAMINATION_2D
            mus = np.where(contaminated, _MU_2D[other], _MU_2D[label])
            phi = rng.normal(mus, _SIGMA_2D)
            phi = np.clip(phi, 0.0, math.pi / 2)
            for angle in phi:
                points.append(DataPoint((math.cos(angle), math.sin(angle)), label))
    else:
        protos = np.zeros((4, 4))
        for label in labels:
            protos[labels.index(label), _PROTOTYPE_INDEX[label]] = 1.0
        centroid = np.full(4, 0.5)
        for label in labels:
            li = labels.index(label)
            others = [i for i in range(4) if i != li]
            contaminated = rng.random(per_class) < _CONTAMINATION_4D
            swap_to = rng.choice(others, size=per_class)
            base_idx = np.where(contaminated, swap_to, li)
            noise = rng.normal(0.0, _SIGMA_4D, size=(per_class, 4))
            vecs = (1 - _MIX_4D) * protos[base_idx] + _MIX_4D * centroid + noise
            vecs = np.clip(vecs, 0.0, None)
            vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
            for row in vecs:
                points.append(DataPoint(tuple(float(v) for v in row), label))
    return Dataset(tuple(points), dimensionality, seed)


def amplitude_encode(point: DataPoint) -> Circuit:
    """Circuit preparing |0..0> -> the point's feature amplitudes."""
    f = point.features
    if len(f) == 2:
        return Circuit(1, (qc.ry(2 * math.atan2(f[1], f[0]), 0),))
    lo = math.hypot(f[0], f[1])
    hi = math.hypot(f[2], f[3])
    theta0 = 2 * math.atan2(hi, lo)
    theta_low = 2 * math.atan2(f[1], f[0]) if lo > 0 else 0.0
    theta_high = 2 * math.atan2(f[3], f[2]) if hi > 0 else 0.0
    builder = CircuitBuilder(2)
    builder.add(qc.ry(theta0, 0))
    # branch applied when qubit 0 is |0>: RY-CX-RY-CX with equal half-angles
    builder.add(qc.ry(theta_low / 2, 1))
    builder.add(qc.cx(0, 1))
    builder.add(qc.ry(theta_low / 2, 1))
    builder.add(qc.cx(0, 1))
    # branch applied when qubit 0 is |1>: opposite second half-angle
    builder.add(qc.ry(theta_high / 2, 1))
    builder.add(qc.cx(0, 1))
    builder.add(qc.ry(-theta_high / 2, 1))
    builder.add(qc.cx(0, 1))
    return builder.build()


def classifier_circuit(params: ClassifierParams, arity: int) -> Circuit:
    if params.arity != arity:
        raise ValueError("params length does not match arity")
    t = params.thetas
    if arity == 1:
        return Circuit(1, (qc.rz(t[0], 0), qc.rx(t[1], 0), qc.measure_z(0)))
    return Circuit(
        2,
        (
            qc.rz(t[0], 0), qc.rx(t[1], 0),
            qc.rz(t[2], 1), qc.rx(t[3], 1),
            qc.cx(0, 1),
            qc.measure_z(0), qc.measure_z(1),
        ),
    )


def classifier_unitary(params: ClassifierParams) -> np.ndarray:
    """Dense unitary of the classifier block (measurements excluded)."""
    return circuit_unitary(classifier_circuit(params, params.arity))


def outcome_probabilities(features: np.ndarray, params: ClassifierParams) -> np.ndarray:
    """Exact outcome distribution rows for a batch of encoded points.

    Amplitude encoding maps features to state amplitudes exactly, so the
    encoded batch is the feature matrix itself; outcome j's probability is
    |<j| U |features>|^2 with U the classifier unitary.
    """
    u = classifier_unitary(params)
    amps = features.astype(np.complex128) @ u.T
    return np.abs(amps) ** 2


def predict(point: DataPoint, params: ClassifierParams) -> str:
    dim = len(point.features)
    if 2 ** params.arity != dim:
        raise ValueError("point dimensionality does not match classifier arity")
    probs = outcome_probabilities(np.array([point.features]), params)[0]
    labels = labels_for_dimensionality(dim)
    # argmax returns the first (lowest-bitstring) index on ties
    return labels[int(np.argmax(np.round(probs, 12)))]


def _batch_accuracy(features, label_idx, params) -> float:
    probs = outcome_probabilities(features, params)
    pred = np.argmax(np.round(probs, 12), axis=1)
    return float(np.mean(pred == label_idx))


def _objective(features, label_idx, thetas, arity) -> float:
    probs = outcome_probabilities(features, ClassifierParams(tuple(thetas)))
    return float(np.mean(probs[np.arange(len(label_idx)), label_idx]))


_GOLDEN = (math.sqrt(5) - 1) / 2


def _golden_section(f, lo, hi, iters=32):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    best = (a + b) / 2
    return best, f(best)


def _optimize(features, label_idx, arity, restarts_thetas):
    n_params = 2 * arity
    best_thetas = None
    best_val = -1.0
    grid = np.linspace(0.0, 2 * math.pi, 17)[:-1]
    for start in restarts_thetas:
        thetas = np.array(start, dtype=np.float64)
        for _sweep in range(3):
            for i in range(n_params):
                def f(angle, i=i):
                    trial = thetas.copy()
                    trial[i] = angle % (2 * math.pi)
                    return _objective(features, label_idx, trial, arity)

                # coarse scan brackets the best mode, golden section refines
                vals = [f(a) for a in grid]
                k = int(np.argmax(vals))
                span = grid[1] - grid[0]
                angle, _ = _golden_section(f, grid[k] - span, grid[k] + span)
                thetas[i] = angle % (2 * math.pi)
        val = _objective(features, label_idx, thetas, arity)
        if val > best_val:
            best_val = val
            best_thetas = thetas.copy()
    return best_thetas, best_val


def fold_indices(dataset: Dataset, folds: int):
    """Deterministic k-fold split derived from the dataset seed."""
    n = len(dataset.points)
    perm = np.random.default_rng(dataset.seed ^ 0x5EEDF01D).permutation(n)
    size = n // folds
    for k in range(folds):
        test = perm[k * size:(k + 1) * size]
        train_idx = np.concatenate([perm[: k * size], perm[(k + 1) * size:]])
        yield train_idx, test


def train(dataset: Dataset, folds: int = 5) -> TrainReport:
    if folds < 2:
        raise ValueError("need at least 2 folds")
    labels = labels_for_dimensionality(dataset.dimensionality)
    label_idx = dataset.label_indices
    if len(set(label_idx.tolist())) < 2:
        raise ValueError("degenerate dataset: single class")
    features = dataset.feature_matrix
    arity = 1 if dataset.dimensionality == 2 else 2
    n_params = 2 * arity
    starts_rng = np.random.default_rng(dataset.seed ^ 0x7A11ED)
    all_starts = starts_rng.uniform(0.0, 2 * math.pi, size=(folds, 8, n_params))

    fold_accs = []
    fold_params = []
    fold_train_accs = []
    for k, (train_idx, test_idx) in enumerate(fold_indices(dataset, folds)):
        thetas, _ = _optimize(
            features[train_idx], label_idx[train_idx], arity, all_starts[k]
        )
        params = ClassifierParams(tuple(float(t) for t in thetas))
        fold_params.append(params)
        fold_train_accs.append(_batch_accuracy(features[train_idx], label_idx[train_idx], params))
        fold_accs.append(_batch_accuracy(features[test_idx], label_idx[test_idx], params))
    best = int(np.argmax(fold_accs))
    return TrainReport(
        params=fold_params[best],
        train_accuracy=float(fold_train_accs[best]),
        test_accuracy=float(np.mean(fold_accs)),
        fold_accuracies=tuple(float(a) for a in fold_accs),
    )


def class_reference_points(dataset: Dataset) -> dict:
    """Normalized per-class mean feature vector (the sweep reference points)."""
    labels = labels_for_dimensionality(dataset.dimensionality)
    features = dataset.feature_matrix
    idx = dataset.label_indices
    out = {}
    for li, label in enumerate(labels):
        mean = features[idx == li].mean(axis=0)
        mean = np.clip(mean, 0.0, None)
        mean /= np.linalg.norm(mean)
        out[label] = DataPoint(tuple(float(v) for v in mean), label)
    return out


def pca_project(dataset: Dataset, dims: int = 3):
    if dims > dataset.dimensionality:
        raise ValueError("cannot project to more dimensions than the data has")
    if dataset.dimensionality != 4:
        raise ValueError("PCA export is defined for the 4D dataset")
    features = dataset.feature_matrix
    centered = features - features.mean(axis=0)
    cov = centered.T @ centered / len(centered)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1][:dims]
    components = []
    for idx in order:
        v = eigvecs[:, idx]
        # fix the sign so the projection is deterministic across platforms
        pivot = int(np.argmax(np.abs(v)))
        if v[pivot] < 0:
            v = -v
        components.append(v)
    basis = np.array(components)
    coords = centered @ basis.T
    return [
        (tuple(float(c) for c in row), point.label)
        for row, point in zip(coords, dataset.points)
    ]


def dataset_to_csv(dataset: Dataset, path) -> None:
    cols = ",".join(f"f{i+1}" for i in range(dataset.dimensionality))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{cols},label\n")
        for p in dataset.points:
            feats = ",".join(repr(float(v)) for v in p.features)
            fh.write(f"{feats},{p.label}\n")


def dataset_from_csv(path, seed: int = 0) -> Dataset:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        dim = len(header) - 1
        points = []
        for line in fh:
            if not line.strip():
                continue
            parts = line.strip().split(",")
            feats = tuple(float(v) for v in parts[:dim])
            points.append(DataPoint(feats, parts[dim]))
    return Dataset(tuple(points), dim, seed)
