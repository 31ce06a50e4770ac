"""Seeded random ensembles of states and Hamiltonians.

Shared by the property tests and the ``qsl verify`` invariant suite so that
both draw from identical distributions.  All draws consume an explicit
``numpy.random.Generator``.
"""

from __future__ import annotations

import numpy as np

from .hs import DensityMatrix, HamiltonianMatrix


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Normalized complex Gaussian vector (Haar-distributed direction)."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density_matrix(
    dim: int, rng: np.random.Generator, rank: int | None = None
) -> DensityMatrix:
    """Full-rank (or given-rank) state G G^dag / Tr(G G^dag) with complex
    Gaussian G."""
    k = dim if rank is None else rank
    g = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_hamiltonian(
    dim: int, rng: np.random.Generator, scale: float = 1.0
) -> HamiltonianMatrix:
    """Gaussian Hermitian matrix (A + A^dag)/2 with entries of size ~scale."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HamiltonianMatrix(scale * (a + a.conj().T) / 2.0)


def gibbs_state(h, beta: float) -> DensityMatrix:
    """Thermal state exp(-beta H) / Z of a Hamiltonian matrix."""
    from .hs import as_matrix

    m = as_matrix(h)
    evals, evecs = np.linalg.eigh((m + m.conj().T) / 2.0)
    # shift by the ground energy before exponentiating for stability
    w = np.exp(-beta * (evals - evals.min()))
    w /= w.sum()
    return DensityMatrix((evecs * w) @ evecs.conj().T)
