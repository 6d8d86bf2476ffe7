"""Generalized Gell-Mann bases for the Lie algebra su(D).

A basis here is a stack of d = D**2 - 1 traceless Hermitian matrices
normalized to Tr(e_a e_b) = 2 delta_ab, together with the real structure
constants C_abc defined by [e_a, e_b] = 2i sum_c C_abc e_c.

Ordering convention: off-diagonal generators are emitted level by level.
For each column index k = 1..D-1 and each row index j < k we append the
symmetric pair generator, then the antisymmetric one, and after all pairs
for that k the diagonal generator with k leading +1 entries.  For D = 2
this gives sigma_x, sigma_y, sigma_z in that order; for D = 3 it gives
the eight Gell-Mann matrices in their usual numbering, so C_123 = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = ["BasisError", "LieBasis", "build_su_basis", "structure_constants"]


class BasisError(ValueError):
    """A generator set failed an algebraic consistency check."""


@dataclass(frozen=True, eq=False)
class LieBasis:
    """Immutable su(D) basis: generators (d, D, D) and structure constants (d, d, d)."""

    dimension: int
    generators: np.ndarray
    structure: np.ndarray

    @property
    def d(self) -> int:
        """Number of generators, D**2 - 1."""
        return self.dimension ** 2 - 1


def _gellmann_stack(dim: int) -> np.ndarray:
    mats = []
    for k in range(1, dim):
        for j in range(k):
            sym = np.zeros((dim, dim), dtype=np.complex128)
            sym[j, k] = 1.0
            sym[k, j] = 1.0
            mats.append(sym)
            asym = np.zeros((dim, dim), dtype=np.complex128)
            asym[j, k] = -1.0j
            asym[k, j] = 1.0j
            mats.append(asym)
        diag = np.zeros((dim, dim), dtype=np.complex128)
        for i in range(k):
            diag[i, i] = 1.0
        diag[k, k] = -k
        diag *= np.sqrt(2.0 / (k * (k + 1)))
        mats.append(diag)
    return np.stack(mats)


def structure_constants(generators: np.ndarray) -> np.ndarray:
    """Structure constants C_abc = Tr([e_a, e_b] e_c) / 4i for a generator stack.

    Accepts a LieBasis or a (d, D, D) array.  Raises BasisError if any
    entry has imaginary part above 1e-10, which would mean the input is
    not a consistently normalized Hermitian basis.
    """
    if isinstance(generators, LieBasis):
        generators = generators.generators
    gens = np.asarray(generators, dtype=np.complex128)
    prod = np.einsum("aij,bjk->abik", gens, gens)
    comm = prod - prod.transpose(1, 0, 2, 3)
    raw = np.einsum("abij,cji->abc", comm, gens) / 4.0j
    residue = np.abs(raw.imag).max() if raw.size else 0.0
    if residue > 1e-10:
        raise BasisError(
            f"structure constants have imaginary residue {residue:.3e} (tolerance 1e-10)"
        )
    return np.ascontiguousarray(raw.real)


def build_su_basis(dim: int) -> LieBasis:
    """Construct the su(dim) basis with its cached structure constants.

    Raises ValueError for dim < 2.  The construction is deterministic:
    repeated calls with the same dim produce bitwise-identical arrays.
    """
    if not isinstance(dim, (int, np.integer)) or isinstance(dim, bool):
        raise ValueError(f"dimension must be an integer, got {dim!r}")
    if dim < 2:
        raise ValueError(f"dimension must be at least 2, got {dim}")
    return _build_cached(int(dim))


@lru_cache(maxsize=None)
def _build_cached(dim: int) -> LieBasis:
    gens = _gellmann_stack(dim)
    herm = np.abs(gens - gens.conj().transpose(0, 2, 1)).max()
    if herm > 1e-12:
        raise BasisError(f"generators not Hermitian, residue {herm:.3e}")
    gram = np.einsum("aij,bji->ab", gens, gens)
    ortho = np.abs(gram - 2.0 * np.eye(dim * dim - 1)).max()
    if ortho > 1e-12:
        raise BasisError(f"generators not orthonormal, residue {ortho:.3e}")
    struct = structure_constants(gens)
    gens.flags.writeable = False
    struct.flags.writeable = False
    return LieBasis(dimension=dim, generators=gens, structure=struct)
