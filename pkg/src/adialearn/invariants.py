"""Randomized self-checks of the algebraic contracts, for any dimension.

Each check reports the worst residual it saw against a fixed tolerance.
These back the command-line verify subcommand and double as a quick
sanity harness when extending the package to new dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evolver import ideal_evolve
from .ham_space import (
    HamiltonianVector,
    RotationStep,
    RotationTrack,
    hamiltonian_matrix,
    rotate_vector,
    rotation_generator,
    rotation_matrix,
    rotation_unitary,
)
from .su_basis import build_su_basis

__all__ = ["CheckResult", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


def _unit(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d)
    return v / np.linalg.norm(v)


def run_checks(dim: int = 2, trials: int = 100, seed: int = 0):
    """Exercise the core contracts for su(dim); returns (results, all_passed)."""
    trials = int(trials)
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    basis = build_su_basis(dim)
    gens = basis.generators
    d = basis.d
    rng = np.random.default_rng(seed)
    results = []

    def record(name, residual, tol):
        results.append(CheckResult(name, float(residual), tol))

    record("generator-hermiticity",
           np.abs(gens - gens.conj().transpose(0, 2, 1)).max(), 1e-12)
    record("generator-orthonormality",
           np.abs(np.einsum("aij,bji->ab", gens, gens).real
                  - 2.0 * np.eye(d)).max(), 1e-12)
    struct = basis.structure
    record("structure-antisymmetry",
           max(np.abs(struct + struct.transpose(1, 0, 2)).max(),
               np.abs(struct + struct.transpose(0, 2, 1)).max()), 1e-12)
    comm = np.einsum("aij,bjk->abik", gens, gens)
    comm = comm - comm.transpose(1, 0, 2, 3)
    rebuilt = 2j * np.einsum("abc,cij->abij", struct, gens)
    record("commutator-reconstruction", np.abs(comm - rebuilt).max(), 1e-10)

    conj = spect = ortho = normres = 0.0
    for _ in range(trials):
        n = HamiltonianVector(_unit(rng, d), basis)
        m = _unit(rng, d)
        theta = rng.uniform(-2.0 * np.pi, 2.0 * np.pi)
        step = RotationStep(m, theta)
        rmat = rotation_matrix(rotation_generator(m, basis), theta)
        ortho = max(ortho, np.abs(rmat.T @ rmat - np.eye(d)).max())
        h_before = hamiltonian_matrix(n)
        rotated = rotate_vector(n, step)
        h_after = hamiltonian_matrix(rotated)
        u = rotation_unitary(m, theta, basis)
        conj = max(conj, np.abs(u @ h_before @ u.conj().T - h_after).max())
        spect = max(spect, np.abs(np.linalg.eigvalsh(h_before)
                                  - np.linalg.eigvalsh(h_after)).max())
        psi = ideal_evolve(_unit(rng, dim).astype(np.complex128),
                           RotationTrack((step,)), basis)
        normres = max(normres, abs(np.linalg.norm(psi) - 1.0))
    record("rotation-orthogonality", ortho, 1e-10)
    record("conjugation-covariance", conj, 1e-9)
    record("spectrum-preservation", spect, 1e-9)
    record("evolution-norm", normres, 1e-10)

    return results, all(r.passed for r in results)
