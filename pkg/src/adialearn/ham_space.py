"""Hamiltonians as unit vectors in su(D) coordinates, and spectrum-preserving rotations.

A Hamiltonian H = sum_a n_a e_a is represented by its coordinate vector n
on the unit sphere in R**d (so Tr H**2 = 2 and the spectrum is fixed).
Rotating n with R = exp(theta A(m)), where A(m)_ij = sum_k C_ikj m_k is
the skew generator for a unit axis m, conjugates H by the unitary
U(m, theta) = exp(-i (theta/2) m.e):

    U H(n) U_dagger = H(R n)

For d = 3 the matrix A(m) is the cross-product matrix of m, and the
rotation acts as the ordinary axis-angle formula

    n' = cos(theta) n - sin(theta) (n x m) + (1 - cos(theta)) (m.n) m
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
from scipy.linalg import expm

from .su_basis import LieBasis

__all__ = [
    "HamiltonianVector",
    "RotationStep",
    "RotationTrack",
    "rotation_generator",
    "rotation_matrix",
    "rotate_vector",
    "hamiltonian_matrix",
    "rotation_unitary",
]

_UNIT_TOL = 1e-10
_RENORM_TOL = 1e-12


def _as_unit(vec, what: str) -> np.ndarray:
    arr = np.asarray(vec, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{what} must be a 1-d real vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite entries")
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > _UNIT_TOL:
        raise ValueError(f"{what} must have unit norm, got {norm!r}")
    return arr


@dataclass(frozen=True, eq=False)
class HamiltonianVector:
    """Unit coordinate vector of a Hamiltonian in a fixed su(D) basis."""

    coords: np.ndarray
    basis: LieBasis

    def __post_init__(self):
        coords = _as_unit(self.coords, "coords")
        if coords.shape[0] != self.basis.d:
            raise ValueError(
                f"coords have length {coords.shape[0]}, basis has d = {self.basis.d}"
            )
        coords = coords.copy()
        coords.flags.writeable = False
        object.__setattr__(self, "coords", coords)

    @classmethod
    def normalized(cls, coords, basis: LieBasis) -> "HamiltonianVector":
        """Scale an arbitrary nonzero vector onto the unit sphere and wrap it."""
        arr = np.asarray(coords, dtype=np.float64)
        norm = float(np.linalg.norm(arr))
        if norm == 0.0 or not np.isfinite(norm):
            raise ValueError("cannot normalize a zero or non-finite vector")
        return cls(arr / norm, basis)


@dataclass(frozen=True, eq=False)
class RotationStep:
    """One rotation arc: a unit axis in R**d and a signed angle in radians."""

    axis: np.ndarray
    angle: float

    def __post_init__(self):
        axis = _as_unit(self.axis, "axis").copy()
        axis.flags.writeable = False
        object.__setattr__(self, "axis", axis)
        angle = float(self.angle)
        if not np.isfinite(angle):
            raise ValueError(f"angle must be finite, got {self.angle!r}")
        object.__setattr__(self, "angle", angle)


@dataclass(frozen=True, eq=False)
class RotationTrack:
    """An ordered sequence of rotation arcs applied left to right."""

    steps: tuple = ()

    def __post_init__(self):
        steps = tuple(self.steps)
        dims = {step.axis.shape[0] for step in steps}
        if len(dims) > 1:
            raise ValueError(f"mixed axis dimensions in track: {sorted(dims)}")
        object.__setattr__(self, "steps", steps)

    @classmethod
    def from_pairs(cls, pairs: Sequence) -> "RotationTrack":
        return cls(tuple(RotationStep(axis, angle) for axis, angle in pairs))

    @property
    def total_angle(self) -> float:
        """Sum of absolute arc angles; proportional to evolution duration."""
        return float(sum(abs(step.angle) for step in self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[RotationStep]:
        return iter(self.steps)

    def __getitem__(self, idx):
        return self.steps[idx]


def rotation_generator(axis, basis: LieBasis) -> np.ndarray:
    """Skew-symmetric generator A(m)_ij = sum_k C_ikj m_k for a unit axis m."""
    m = _as_unit(axis, "axis")
    if m.shape[0] != basis.d:
        raise ValueError(f"axis has length {m.shape[0]}, basis has d = {basis.d}")
    return np.einsum("ikj,k->ij", basis.structure, m)


def rotation_matrix(generator: np.ndarray, theta: float) -> np.ndarray:
    """Orthogonal rotation exp(theta * A) for a skew-symmetric A."""
    a = np.asarray(generator, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"generator must be square, got shape {a.shape}")
    skew = np.abs(a + a.T).max() if a.size else 0.0
    if skew > 1e-8:
        raise ValueError(f"generator is not skew-symmetric, residue {skew:.3e}")
    theta = float(theta)
    if not np.isfinite(theta):
        raise ValueError(f"angle must be finite, got {theta!r}")
    r = expm(theta * a)
    ortho = np.abs(r.T @ r - np.eye(a.shape[0])).max()
    if ortho > _UNIT_TOL:
        raise ValueError(f"rotation drifted off the orthogonal group, residue {ortho:.3e}")
    return r


def rotate_vector(vec: HamiltonianVector, step: RotationStep) -> HamiltonianVector:
    """Apply one rotation arc to a Hamiltonian vector, preserving unit norm.

    Uses the axis-angle closed form when d = 3 and the matrix exponential
    otherwise; the two agree to machine precision.
    """
    n = vec.coords
    m = step.axis
    if m.shape[0] != n.shape[0]:
        raise ValueError(
            f"axis dimension {m.shape[0]} does not match vector dimension {n.shape[0]}"
        )
    c, s = np.cos(step.angle), np.sin(step.angle)
    if n.shape[0] == 3:
        out = c * n - s * np.cross(n, m) + (1.0 - c) * np.dot(m, n) * m
    else:
        out = rotation_matrix(rotation_generator(m, vec.basis), step.angle) @ n
    norm = float(np.linalg.norm(out))
    if abs(norm - 1.0) > _RENORM_TOL:
        out = out / norm
    return HamiltonianVector(out, vec.basis)


def hamiltonian_matrix(vec: HamiltonianVector) -> np.ndarray:
    """Assemble the D x D Hermitian matrix sum_a n_a e_a."""
    return np.einsum("a,aij->ij", vec.coords, vec.basis.generators)


def rotation_unitary(axis, theta: float, basis: LieBasis) -> np.ndarray:
    """Unitary exp(-i (theta/2) m.e) implementing the rotation on states."""
    m = _as_unit(axis, "axis")
    if m.shape[0] != basis.d:
        raise ValueError(f"axis has length {m.shape[0]}, basis has d = {basis.d}")
    theta = float(theta)
    if not np.isfinite(theta):
        raise ValueError(f"angle must be finite, got {theta!r}")
    gen = np.einsum("a,aij->ij", m, basis.generators)
    evals, evecs = np.linalg.eigh(gen)
    phases = np.exp(-0.5j * theta * evals)
    return (evecs * phases) @ evecs.conj().T
