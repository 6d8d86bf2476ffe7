"""Benchmark classification tasks and their reference models.

Task one: scalar inputs on [-1, 1], class 1 when |x| > 1/3.  Task two:
planar inputs on [-1, 1]**2, class 0 inside the centered circle of area 2
(radius sqrt(2/pi)), class 1 outside.  Both reference models are
three-unit two-level classifiers with a z-y-z variational block per unit
and a sigma_z readout, starting from the Hamiltonian vector (0, 0, -1).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .evolver import Schedule
from .learning import (
    EncodingBlock,
    LearningModel,
    VariationalBlock,
    batch_predict_ideal,
    predict_adiabatic,
    _dataset_arrays,
)
from .ham_space import HamiltonianVector
from .su_basis import build_su_basis

__all__ = [
    "BOUNDARY_RADIUS_CASE2",
    "CASE1_REFERENCE_WEIGHTS",
    "CASE2_REFERENCE_WEIGHTS",
    "Dataset",
    "Sample",
    "label_case1",
    "label_case2",
    "gen_case1",
    "gen_case2",
    "case1_model",
    "case2_model",
    "accuracy",
]

BOUNDARY_RADIUS_CASE2 = float(np.sqrt(2.0 / np.pi))

CASE1_REFERENCE_WEIGHTS = np.array(
    [-0.572, 0.643, 0.478, 1.57, 1.886, -1.225, -1.4, -1.568, 0.856])
CASE2_REFERENCE_WEIGHTS = np.array(
    [-0.268, 1.628, 0.0176, 2.367, 0.1684, 2.796, 1.044, 1.616, 0.866])
CASE1_REFERENCE_WEIGHTS.flags.writeable = False
CASE2_REFERENCE_WEIGHTS.flags.writeable = False


@dataclass(frozen=True)
class Sample:
    """One labeled point together with its model readout, if any."""

    features: tuple
    label: int
    readout: float = float("nan")


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix (N, k), integer labels (N,), and provenance notes."""

    features: np.ndarray
    labels: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        if feats.ndim == 1:
            feats = feats.reshape(-1, 1)
        if feats.ndim != 2:
            raise ValueError(f"features must be 2-d, got shape {feats.shape}")
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.shape != (feats.shape[0],):
            raise ValueError("labels do not match the number of feature rows")
        if not np.all((labels == 0) | (labels == 1)):
            raise ValueError("labels must be 0 or 1")
        feats = np.ascontiguousarray(feats)
        feats.flags.writeable = False
        labels = np.ascontiguousarray(labels)
        labels.flags.writeable = False
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.features.shape[0]

    @property
    def targets(self) -> np.ndarray:
        """Labels mapped to the regression targets -1.0 and +1.0."""
        return np.where(self.labels == 1, 1.0, -1.0)

    def write_csv(self, path) -> None:
        """One row per sample: feature columns then the label, with a header."""
        ncol = self.features.shape[1]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"x{i + 1}" for i in range(ncol)] + ["label"])
            for row, label in zip(self.features, self.labels):
                writer.writerow([repr(float(v)) for v in row] + [int(label)])

    @classmethod
    def read_csv(cls, path) -> "Dataset":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if not header or header[-1] != "label":
                raise ValueError(f"{path}: expected a header ending in 'label'")
            ncol = len(header) - 1
            if ncol < 1:
                raise ValueError(f"{path}: no feature columns")
            feats, labels = [], []
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != ncol + 1:
                    raise ValueError(f"{path}:{lineno}: expected {ncol + 1} columns")
                feats.append([float(v) for v in row[:ncol]])
                labels.append(int(row[ncol]))
        if not feats:
            raise ValueError(f"{path}: no samples")
        return cls(np.asarray(feats), np.asarray(labels),
                   provenance={"source": str(path)})


def label_case1(x: float) -> int:
    """1 when |x| > 1/3, else 0."""
    return int(abs(float(x)) > 1.0 / 3.0)


def label_case2(x1: float, x2: float) -> int:
    """0 on or inside the circle of area 2 around the origin, else 1."""
    return int(float(x1) ** 2 + float(x2) ** 2 > 2.0 / np.pi)


def gen_case1(count: int, mode: str = "grid", seed: int | None = None) -> Dataset:
    """Scalar task data: an even grid over [-1, 1] or seeded uniform draws."""
    count = int(count)
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    if mode == "grid":
        xs = np.linspace(-1.0, 1.0, count)
    elif mode == "random":
        xs = np.random.default_rng(seed).uniform(-1.0, 1.0, count)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    labels = (np.abs(xs) > 1.0 / 3.0).astype(np.int64)
    return Dataset(xs.reshape(-1, 1), labels,
                   provenance={"task": "case1", "mode": mode, "count": count,
                               "seed": seed})


def gen_case2(count: int, seed: int = 0) -> Dataset:
    """Planar task data: seeded uniform draws from [-1, 1]**2."""
    count = int(count)
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    pts = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(count, 2))
    labels = (pts[:, 0] ** 2 + pts[:, 1] ** 2 > 2.0 / np.pi).astype(np.int64)
    return Dataset(pts, labels,
                   provenance={"task": "case2", "count": count, "seed": seed})


def _reference_model(encoding_steps, units: int) -> LearningModel:
    if int(units) < 0:
        raise ValueError(f"units must be non-negative, got {units}")
    basis = build_su_basis(2)
    ex = np.array([1.0, 0.0, 0.0])
    ey = np.array([0.0, 1.0, 0.0])
    ez = np.array([0.0, 0.0, 1.0])
    axes = {"x": ex, "y": ey, "z": ez}
    enc = EncodingBlock(tuple((axes[a], f) for a, f in encoding_steps))
    var = VariationalBlock((ez, ey, ez))
    n0 = HamiltonianVector(np.array([0.0, 0.0, -1.0]), basis)
    observable = basis.generators[2]
    return LearningModel(basis=basis, n0=n0,
                         units=tuple((enc, var) for _ in range(int(units))),
                         observable=observable)


def case1_model(units: int = 3) -> LearningModel:
    """Scalar task model: per unit, an x-encoding arc then z-y-z weights."""
    return _reference_model((("x", 0),), units)


def case2_model(units: int = 3) -> LearningModel:
    """Planar task model: per unit, z and y encoding arcs then z-y-z weights."""
    return _reference_model((("z", 0), ("y", 1)), units)


def accuracy(model: LearningModel, w, dataset, predictor: str = "ideal",
             schedule: Schedule | None = None):
    """Classification accuracy of the model; returns (accuracy, misclassified).

    predictor selects the forward path: "ideal" uses exact arc unitaries,
    "adiabatic" requires a schedule and evolves each sample at speed 1/g.
    Misclassified samples are returned with their readouts.
    """
    feats, labels = _dataset_arrays(dataset)
    if predictor == "ideal":
        preds = batch_predict_ideal(model, feats, w)
    elif predictor == "adiabatic":
        if schedule is None:
            raise ValueError("adiabatic prediction requires a schedule")
        preds = np.array([
            predict_adiabatic(model, row, w, schedule, stride=0)[0]
            for row in feats
        ])
    else:
        raise ValueError(f"unknown predictor {predictor!r}")
    assigned = (preds > 0.0).astype(np.int64)
    wrong = assigned != labels
    misses = [Sample(tuple(feats[i]), int(labels[i]), float(preds[i]))
              for i in np.flatnonzero(wrong)]
    return float(np.mean(~wrong)), misses
