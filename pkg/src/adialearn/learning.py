"""Variational classifier built from rotation tracks.

A model is a chain of units; each unit is an encoding block (axes whose
angles come from input features, re-uploaded identically in every unit)
followed by a variational block (axes whose angles are trainable weights).
A forward pass rotates the initial Hamiltonian vector along the resulting
track, evolves the initial ground state, and reads out the expectation of
a fixed observable.  The sign of the readout is the class decision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .evolver import (
    Schedule,
    adiabatic_evolve,
    expectation,
    ground_state,
    ideal_evolve,
)
from .ham_space import (
    HamiltonianVector,
    RotationTrack,
    _as_unit,
    hamiltonian_matrix,
    rotation_unitary,
)
from .su_basis import LieBasis

__all__ = [
    "EncodingBlock",
    "VariationalBlock",
    "LearningModel",
    "TrainConfig",
    "TrainReport",
    "build_track",
    "predict_ideal",
    "predict_adiabatic",
    "classify",
    "loss",
    "train",
    "parameter_shift_gradient",
]


@dataclass(frozen=True, eq=False)
class EncodingBlock:
    """Sequence of (axis, feature_index) pairs; angles come from the input."""

    steps: tuple = ()

    def __post_init__(self):
        checked = []
        for axis, feat in self.steps:
            axis = _as_unit(axis, "encoding axis").copy()
            axis.flags.writeable = False
            feat = int(feat)
            if feat < 0:
                raise ValueError(f"feature index must be non-negative, got {feat}")
            checked.append((axis, feat))
        object.__setattr__(self, "steps", tuple(checked))


@dataclass(frozen=True, eq=False)
class VariationalBlock:
    """Sequence of axes whose angles are trainable weights."""

    axes: tuple

    def __post_init__(self):
        if len(self.axes) == 0:
            raise ValueError("variational block needs at least one axis")
        checked = []
        for axis in self.axes:
            axis = _as_unit(axis, "variational axis").copy()
            axis.flags.writeable = False
            checked.append(axis)
        object.__setattr__(self, "axes", tuple(checked))


@dataclass(frozen=True, eq=False)
class LearningModel:
    """Initial Hamiltonian vector, unit chain, and readout observable."""

    basis: LieBasis
    n0: HamiltonianVector
    units: tuple
    observable: np.ndarray

    def __post_init__(self):
        obs = np.asarray(self.observable, dtype=np.complex128)
        dim = self.basis.dimension
        if obs.shape != (dim, dim):
            raise ValueError(f"observable shape {obs.shape} does not match D = {dim}")
        if np.abs(obs - obs.conj().T).max() > 1e-10:
            raise ValueError("observable must be Hermitian")
        obs = obs.copy()
        obs.flags.writeable = False
        object.__setattr__(self, "observable", obs)
        if self.n0.basis.dimension != dim:
            raise ValueError("initial vector basis does not match model basis")
        units = tuple((enc, var) for enc, var in self.units)
        for enc, var in units:
            for axis, _ in enc.steps:
                if axis.shape[0] != self.basis.d:
                    raise ValueError("encoding axis dimension does not match basis")
            for axis in var.axes:
                if axis.shape[0] != self.basis.d:
                    raise ValueError("variational axis dimension does not match basis")
        if units:
            ref = units[0][0]
            for enc, _ in units[1:]:
                same = len(enc.steps) == len(ref.steps) and all(
                    f1 == f2 and np.allclose(a1, a2, atol=1e-12)
                    for (a1, f1), (a2, f2) in zip(enc.steps, ref.steps)
                )
                if not same:
                    raise ValueError("encoding layout must be identical in every unit")
        object.__setattr__(self, "units", units)

    @property
    def parameter_count(self) -> int:
        return sum(len(var.axes) for _, var in self.units)

    @property
    def input_dim(self) -> int:
        feats = [feat for enc, _ in self.units for _, feat in enc.steps]
        return 1 + max(feats) if feats else 0


def _features(model: LearningModel, x) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if arr.ndim != 1:
        raise ValueError(f"input must be a scalar or 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("input contains non-finite entries")
    if arr.shape[0] < model.input_dim:
        raise ValueError(
            f"input has {arr.shape[0]} features, model reads {model.input_dim}"
        )
    return arr


def _weights(model: LearningModel, w) -> np.ndarray:
    arr = np.asarray(w, dtype=np.float64)
    if arr.shape != (model.parameter_count,):
        raise ValueError(
            f"weights have shape {arr.shape}, model has {model.parameter_count} parameters"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError("weights contain non-finite entries")
    return arr


def build_track(model: LearningModel, x, w) -> RotationTrack:
    """Interleave encoding and variational arcs into one rotation track."""
    feats = _features(model, x)
    weights = _weights(model, w)
    steps = []
    k = 0
    for enc, var in model.units:
        for axis, feat in enc.steps:
            steps.append((axis, float(feats[feat])))
        for axis in var.axes:
            steps.append((axis, float(weights[k])))
            k += 1
    return RotationTrack.from_pairs(steps)


def _initial_state(model: LearningModel) -> np.ndarray:
    return ground_state(hamiltonian_matrix(model.n0))


def predict_ideal(model: LearningModel, x, w) -> float:
    """Readout expectation after exact (infinitely fast) track evolution."""
    track = build_track(model, x, w)
    psi = ideal_evolve(_initial_state(model), track, model.basis)
    return expectation(psi, model.observable)


def predict_adiabatic(model: LearningModel, x, w, schedule: Schedule,
                      stride: int = 50):
    """Readout expectation after adiabatic evolution; returns (value, trace)."""
    track = build_track(model, x, w)
    psi, trace = adiabatic_evolve(_initial_state(model), model.n0, track,
                                  schedule, observable=model.observable,
                                  stride=stride)
    return expectation(psi, model.observable), trace


def classify(value: float) -> int:
    """Map a readout expectation to a class label: 1 for positive, else 0."""
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"readout must be finite, got {value!r}")
    return 0 if value <= 0.0 else 1


def _dataset_arrays(dataset):
    feats = np.asarray(dataset.features, dtype=np.float64)
    if feats.ndim == 1:
        feats = feats.reshape(-1, 1)
    labels = np.asarray(dataset.labels, dtype=np.int64)
    if feats.shape[0] != labels.shape[0]:
        raise ValueError("features and labels disagree on sample count")
    if feats.shape[0] == 0:
        raise ValueError("dataset is empty")
    return feats, labels


def _axis_gate_batch(axis: np.ndarray, basis: LieBasis,
                     angles: np.ndarray) -> np.ndarray:
    """exp(-i (theta/2) m.e) for a batch of angles, shape (k, D, D)."""
    gen = np.einsum("a,aij->ij", axis, basis.generators)
    evals, evecs = np.linalg.eigh(gen)
    phases = np.exp(-0.5j * np.outer(angles, evals))
    return np.einsum("ab,kb,cb->kac", evecs, phases, evecs.conj())


def batch_predict_ideal(model: LearningModel, features: np.ndarray,
                        w) -> np.ndarray:
    """Ideal readout for every row of features at once.

    Equivalent to predict_ideal per sample; variational gates are built
    once per call and encoding gates are batched over the samples.
    """
    weights = _weights(model, w)
    feats = np.asarray(features, dtype=np.float64)
    if feats.ndim == 1:
        feats = feats.reshape(-1, 1)
    if feats.shape[1] < model.input_dim:
        raise ValueError(
            f"features have {feats.shape[1]} columns, model reads {model.input_dim}"
        )
    nsamp = feats.shape[0]
    dim = model.basis.dimension
    total = np.broadcast_to(np.eye(dim, dtype=np.complex128),
                            (nsamp, dim, dim)).copy()
    k = 0
    for enc, var in model.units:
        for axis, feat in enc.steps:
            gates = _axis_gate_batch(axis, model.basis, feats[:, feat])
            total = gates @ total
        for axis in var.axes:
            gate = rotation_unitary(axis, weights[k], model.basis)
            total = gate @ total
            k += 1
    psis = total @ _initial_state(model)
    return np.real(np.einsum("ka,ab,kb->k", psis.conj(), model.observable, psis))


def loss(model: LearningModel, dataset, w) -> float:
    """Sum of squared errors between readouts and the +-1 class targets."""
    feats, labels = _dataset_arrays(dataset)
    targets = np.where(labels == 1, 1.0, -1.0)
    preds = batch_predict_ideal(model, feats, w)
    return float(np.sum((preds - targets) ** 2))


@dataclass(frozen=True)
class TrainConfig:
    """Derivative-free training settings.

    initial is "zeros", "random", or an explicit weight vector; budget
    caps total loss evaluations across all restarts.
    """

    initial: object = "zeros"
    budget: int = 2000
    tolerance: float = 1e-6
    seed: int = 0
    restarts: int = 0
    rhobeg: float = 0.5
    method: str = "cobyla"

    def __post_init__(self):
        if int(self.budget) < 1:
            raise ValueError(f"budget must be at least 1, got {self.budget!r}")
        object.__setattr__(self, "budget", int(self.budget))
        if self.method not in ("cobyla", "nelder-mead"):
            raise ValueError(f"unknown method {self.method!r}")
        if not float(self.tolerance) > 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance!r}")
        if int(self.restarts) < 0:
            raise ValueError(f"restarts must be non-negative, got {self.restarts!r}")
        object.__setattr__(self, "restarts", int(self.restarts))
        if not float(self.rhobeg) > 0.0:
            raise ValueError(f"rhobeg must be positive, got {self.rhobeg!r}")


@dataclass(frozen=True)
class TrainReport:
    """Outcome of a training run; history holds one loss per evaluation."""

    method: str
    evaluations: int
    initial_loss: float
    final_loss: float
    accuracy: float
    improved: bool
    history: np.ndarray


def _initial_weights(model: LearningModel, config: TrainConfig,
                     rng: np.random.Generator) -> np.ndarray:
    if isinstance(config.initial, str):
        if config.initial == "zeros":
            return np.zeros(model.parameter_count)
        if config.initial == "random":
            return rng.uniform(-np.pi, np.pi, model.parameter_count)
        raise ValueError(f"unknown initial weight scheme {config.initial!r}")
    return _weights(model, config.initial).copy()


def train(model: LearningModel, dataset, config: TrainConfig):
    """Minimize the squared-error loss; returns (best_weights, TrainReport).

    The optimizer is derivative-free (COBYLA by default) and the whole
    run is deterministic for a fixed config.  The returned weights are
    the best seen across all evaluations, so the final loss never
    exceeds the initial one.
    """
    feats, labels = _dataset_arrays(dataset)
    targets = np.where(labels == 1, 1.0, -1.0)
    rng = np.random.default_rng(config.seed)
    w0 = _initial_weights(model, config, rng)

    history = []
    best = {"loss": np.inf, "w": w0.copy()}

    def objective(w):
        value = float(np.sum((batch_predict_ideal(model, feats, w) - targets) ** 2))
        history.append(value)
        if value < best["loss"]:
            best["loss"] = value
            best["w"] = np.asarray(w, dtype=np.float64).copy()
        return value

    initial_loss = objective(w0)
    attempts = 1 + config.restarts
    for attempt in range(attempts):
        remaining = config.budget - len(history)
        if remaining < 1:
            break
        share = min(remaining, max(1, config.budget // attempts))
        start = w0 if attempt == 0 else rng.uniform(-np.pi, np.pi,
                                                    model.parameter_count)
        if config.method == "cobyla":
            minimize(objective, start, method="COBYLA", tol=config.tolerance,
                     options={"rhobeg": config.rhobeg, "maxiter": share})
        else:
            minimize(objective, start, method="Nelder-Mead",
                     options={"maxfev": share, "xatol": config.tolerance,
                              "fatol": config.tolerance})

    preds = batch_predict_ideal(model, feats, best["w"])
    hits = (preds > 0.0).astype(np.int64) == labels
    report = TrainReport(
        method=config.method,
        evaluations=len(history),
        initial_loss=initial_loss,
        final_loss=best["loss"],
        accuracy=float(np.mean(hits)),
        improved=best["loss"] < initial_loss,
        history=np.asarray(history),
    )
    return best["w"], report


def parameter_shift_gradient(model: LearningModel, x, w, index: int) -> float:
    """Exact derivative of the ideal readout via +-pi/2 angle shifts.

    Valid for two-level models, where every arc generator squares to the
    identity; larger D is rejected.
    """
    if model.basis.dimension != 2:
        raise ValueError("parameter shift rule holds only for two-level models")
    weights = _weights(model, w)
    index = int(index)
    if not 0 <= index < model.parameter_count:
        raise ValueError(
            f"index {index} out of range for {model.parameter_count} parameters"
        )
    wp = weights.copy()
    wm = weights.copy()
    wp[index] += np.pi / 2
    wm[index] -= np.pi / 2
    return 0.5 * (predict_ideal(model, x, wp) - predict_ideal(model, x, wm))
