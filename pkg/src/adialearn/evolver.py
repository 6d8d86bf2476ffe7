"""Schrodinger evolution along rotation tracks.

Two integrators share the track language.  ideal_evolve applies the exact
rotation unitaries arc by arc (infinitely fast driving).  adiabatic_evolve
drives the Hamiltonian coordinate vector along each arc at angular speed
1/g (duration g * |angle| per arc), splitting the arc into sub-steps no
wider than dtheta and applying the exact propagator of the midpoint
Hamiltonian on each sub-step:

    psi <- exp(-i * H(n_mid) * g * |dtheta_sub|) psi

Sub-step unitaries within a sampling block are combined by pairwise
tree multiplication, which keeps the work vectorized without changing
the operator ordering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ham_space import (
    HamiltonianVector,
    RotationTrack,
    hamiltonian_matrix,
    rotation_generator,
    rotation_unitary,
)
from .su_basis import LieBasis

__all__ = [
    "DegeneracyError",
    "Schedule",
    "EvolutionTrace",
    "ground_state",
    "fidelity",
    "expectation",
    "ideal_evolve",
    "adiabatic_evolve",
]

_GAP_TOL = 1e-9
_STATE_TOL = 1e-10
_RENORM_TOL = 1e-12


class DegeneracyError(ValueError):
    """The ground level of a Hamiltonian is (numerically) degenerate."""


@dataclass(frozen=True)
class Schedule:
    """Adiabatic driving parameters: slowness g and sub-step width dtheta.

    The duration of an arc with angle theta is g * |theta|, so larger g
    means slower driving.  dtheta caps the angular width of one propagator
    sub-step; 5e-4 reproduces the reference operating point g * dtheta = 0.01.
    """

    g: float
    dtheta: float = 5e-4

    def __post_init__(self):
        g = float(self.g)
        dtheta = float(self.dtheta)
        if not np.isfinite(g) or g <= 0.0:
            raise ValueError(f"g must be positive and finite, got {self.g!r}")
        if not np.isfinite(dtheta) or not 0.0 < dtheta <= 0.01:
            raise ValueError(f"dtheta must lie in (0, 0.01], got {self.dtheta!r}")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "dtheta", dtheta)


@dataclass(frozen=True, eq=False)
class EvolutionTrace:
    """Sampled history of an adiabatic run.

    times are strictly increasing and start at 0; fidelities are overlaps
    with the instantaneous ground state; expectations are of the supplied
    observable (or of the instantaneous Hamiltonian); coords holds the
    driven coordinate vector at each sample.
    """

    times: np.ndarray
    fidelities: np.ndarray
    expectations: np.ndarray
    coords: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        fids = np.asarray(self.fidelities, dtype=np.float64)
        exps = np.asarray(self.expectations, dtype=np.float64)
        coords = np.asarray(self.coords, dtype=np.float64)
        if not (times.shape == fids.shape == exps.shape == coords.shape[:1]):
            raise ValueError("trace arrays have inconsistent lengths")
        if times.size == 0:
            raise ValueError("trace must contain at least one sample")
        if times.size > 1 and not np.all(np.diff(times) > 0.0):
            raise ValueError("trace times must be strictly increasing")
        if fids.min() < -1e-12 or fids.max() > 1.0 + 1e-12:
            raise ValueError("trace fidelities leave [0, 1] beyond tolerance")
        fids = np.clip(fids, 0.0, 1.0)
        for arr, name in ((times, "times"), (fids, "fidelities"),
                          (exps, "expectations"), (coords, "coords")):
            arr = np.ascontiguousarray(arr)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return self.times.size

    @property
    def min_fidelity(self) -> float:
        return float(self.fidelities.min())

    @property
    def duration(self) -> float:
        return float(self.times[-1])


def _as_state(state, dim: int | None = None) -> np.ndarray:
    psi = np.asarray(state, dtype=np.complex128)
    if psi.ndim != 1:
        raise ValueError(f"state must be a 1-d vector, got shape {psi.shape}")
    if dim is not None and psi.shape[0] != dim:
        raise ValueError(f"state has dimension {psi.shape[0]}, expected {dim}")
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > _STATE_TOL:
        raise ValueError(f"state must be normalized, got norm {norm!r}")
    return psi


def _check_hermitian(op: np.ndarray, what: str) -> np.ndarray:
    op = np.asarray(op, dtype=np.complex128)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError(f"{what} must be a square matrix, got shape {op.shape}")
    residue = np.abs(op - op.conj().T).max()
    if residue > 1e-10:
        raise ValueError(f"{what} is not Hermitian, residue {residue:.3e}")
    return op


def ground_state(hamiltonian: np.ndarray) -> np.ndarray:
    """Lowest eigenvector, with the first significant component made real positive.

    Raises DegeneracyError when the two lowest eigenvalues are closer
    than 1e-9, since the ground state is then not well defined.
    """
    h = _check_hermitian(hamiltonian, "hamiltonian")
    evals, evecs = np.linalg.eigh(h)
    if evals.shape[0] > 1 and evals[1] - evals[0] < _GAP_TOL:
        raise DegeneracyError(
            f"ground level degenerate: gap {evals[1] - evals[0]:.3e} below {_GAP_TOL}"
        )
    return _fix_phase(evecs[:, 0])


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    for comp in vec:
        if abs(comp) > 1e-8:
            return vec * (abs(comp) / comp)
    return vec


def fidelity(a, b) -> float:
    """Squared overlap |<a|b>|**2, clipped into [0, 1]."""
    va = _as_state(a)
    vb = _as_state(b, va.shape[0])
    return float(min(max(abs(np.vdot(va, vb)) ** 2, 0.0), 1.0))


def expectation(state, observable) -> float:
    """Real expectation value <psi|O|psi> of a Hermitian observable."""
    psi = _as_state(state)
    op = _check_hermitian(observable, "observable")
    if op.shape[0] != psi.shape[0]:
        raise ValueError(f"observable dimension {op.shape[0]} does not match state")
    return float(np.real(psi.conj() @ op @ psi))


def ideal_evolve(psi0, track: RotationTrack, basis: LieBasis) -> np.ndarray:
    """Apply the exact arc unitaries in order; the infinitely fast limit."""
    psi = _as_state(psi0, basis.dimension)
    for step in track:
        psi = rotation_unitary(step.axis, step.angle, basis) @ psi
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > _RENORM_TOL:
        psi = psi / norm
    return psi


def _axis_rotate_batch(n: np.ndarray, m: np.ndarray, basis: LieBasis,
                       phis: np.ndarray) -> np.ndarray:
    """Coordinates of n rotated about axis m by each angle in phis, shape (k, d)."""
    if n.shape[0] == 3:
        c = np.cos(phis)[:, None]
        s = np.sin(phis)[:, None]
        return c * n - s * np.cross(n, m) + (1.0 - c) * np.dot(m, n) * m
    gen = rotation_generator(m, basis)
    evals, evecs = np.linalg.eigh(1j * gen)
    w = evecs.conj().T @ n.astype(np.complex128)
    phases = np.exp(-1j * np.outer(phis, evals))
    return np.einsum("ab,kb->ka", evecs, phases * w).real


def _substep_unitaries(coords: np.ndarray, basis: LieBasis, dt: float) -> np.ndarray:
    """exp(-i * H(n) * dt) for each coordinate row, shape (k, D, D)."""
    norms = np.linalg.norm(coords, axis=1, keepdims=True)
    coords = coords / norms
    hmats = np.einsum("ka,aij->kij", coords, basis.generators)
    if basis.dimension == 2:
        # unit coordinate vectors give H**2 = I, so the exponential closes
        eye = np.eye(2, dtype=np.complex128)
        return np.cos(dt) * eye - 1j * np.sin(dt) * hmats
    evals, evecs = np.linalg.eigh(hmats)
    phases = np.exp(-1j * dt * evals)
    return np.einsum("kab,kb,kcb->kac", evecs, phases, evecs.conj())


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    """Product mats[-1] @ ... @ mats[0] by pairwise tree reduction."""
    while mats.shape[0] > 1:
        half = mats.shape[0] // 2
        paired = np.matmul(mats[1:2 * half:2], mats[0:2 * half:2])
        if mats.shape[0] % 2:
            paired = np.concatenate([paired, mats[2 * half:]], axis=0)
        mats = paired
    return mats[0]


def adiabatic_evolve(psi0, start: HamiltonianVector, track: RotationTrack,
                     schedule: Schedule, *, observable=None, stride: int = 50):
    """Drive the Hamiltonian along the track at speed 1/g and evolve psi0.

    Returns (final_state, EvolutionTrace).  The trace is sampled at t = 0,
    at every stride-th sub-step within each arc, and at each arc end;
    stride = 0 records arc ends only.  Zero-angle arcs are skipped and
    contribute no time, so an effectively empty track yields the single
    t = 0 sample.
    """
    basis = start.basis
    psi = _as_state(psi0, basis.dimension)
    if not isinstance(stride, (int, np.integer)) or stride < 0:
        raise ValueError(f"stride must be a non-negative integer, got {stride!r}")
    obs = None
    if observable is not None:
        obs = _check_hermitian(observable, "observable")
        if obs.shape[0] != basis.dimension:
            raise ValueError("observable dimension does not match basis")

    times = [0.0]
    snaps = [psi]
    snap_coords = [start.coords]

    n_arc = start.coords
    t_arc = 0.0
    for step in track:
        if step.angle == 0.0:
            continue
        if step.axis.shape[0] != basis.d:
            raise ValueError("track axis dimension does not match basis")
        nsub = int(np.ceil(abs(step.angle) / schedule.dtheta))
        delta = step.angle / nsub
        dt = schedule.g * abs(delta)

        mids = _axis_rotate_batch(n_arc, step.axis, basis,
                                  (np.arange(nsub) + 0.5) * delta)
        subs = _substep_unitaries(mids, basis, dt)

        width = stride if stride >= 1 else nsub
        ends = list(range(width, nsub, width)) + [nsub]
        lo = 0
        for end in ends:
            psi = _ordered_product(subs[lo:end]) @ psi
            norm = float(np.linalg.norm(psi))
            if abs(norm - 1.0) > _RENORM_TOL:
                psi = psi / norm
            times.append(t_arc + end * dt)
            snaps.append(psi)
            lo = end
        bound_coords = _axis_rotate_batch(n_arc, step.axis, basis,
                                          np.asarray(ends, dtype=np.float64) * delta)
        snap_coords.extend(bound_coords)
        n_arc = bound_coords[-1] / np.linalg.norm(bound_coords[-1])
        t_arc += nsub * dt

    snaps = np.asarray(snaps)
    coords = np.asarray(snap_coords)
    hmats = np.einsum("ka,aij->kij", coords, basis.generators)
    evals, evecs = np.linalg.eigh(hmats)
    if basis.dimension > 1:
        gaps = evals[:, 1] - evals[:, 0]
        if gaps.min() < _GAP_TOL:
            idx = int(gaps.argmin())
            raise DegeneracyError(
                f"ground level degenerate at t = {times[idx]:.6g}: gap {gaps.min():.3e}"
            )
    grounds = evecs[:, :, 0]
    fids = np.abs(np.einsum("kd,kd->k", grounds.conj(), snaps)) ** 2
    if obs is not None:
        exps = np.real(np.einsum("kd,de,ke->k", snaps.conj(), obs, snaps))
    else:
        exps = np.real(np.einsum("kd,kde,ke->k", snaps.conj(), hmats, snaps))

    trace = EvolutionTrace(times=np.asarray(times), fidelities=fids,
                           expectations=exps, coords=coords)
    return psi, trace
