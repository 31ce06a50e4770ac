"""Hilbert-Schmidt algebra for density matrices and Hamiltonians.

Operators are finite-dimensional complex matrices carrying the Hilbert-Schmidt
(Frobenius) inner product Tr(A^dag B).  ``DensityMatrix`` and
``HamiltonianMatrix`` wrap raw arrays with validated invariants; every
operation below is a pure function and all wrapped arrays are read-only.

Numerical policy: matrices are symmetrized as (A + A^dag)/2 before any
eigendecomposition, eigenvalues in [-1e-10, 0) are clamped to zero, and
``numpy.linalg.eigh`` is the single spectral backend.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10
PURITY_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-10
ORTHONORMALITY_TOL = 1e-12


def as_matrix(a) -> np.ndarray:
    """Coerce a wrapper (``DensityMatrix``/``HamiltonianMatrix``) or
    array-like to a square complex ndarray."""
    m = getattr(a, "matrix", a)
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def _readonly(m: np.ndarray) -> np.ndarray:
    out = np.array(m, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entrywise deviation of ``m`` from its adjoint."""
    return float(np.abs(m - m.conj().T).max())


@dataclass(frozen=True)
class DensityMatrix:
    """A unit-trace, Hermitian, positive-semidefinite matrix.

    Construction validates Hermiticity (1e-12 entrywise), unit trace (1e-12),
    the eigenvalue floor (no eigenvalue below -1e-10), and purity
    Tr(rho^2) in (0, 1] up to 1e-12.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if hermiticity_defect(m) > HERMITIAN_TOL:
            raise ValueError(
                f"density matrix is not Hermitian: defect "
                f"{hermiticity_defect(m):.3e} > {HERMITIAN_TOL:.0e}"
            )
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr:.15g} is not 1")
        evals = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
        if evals.min() < EIGENVALUE_FLOOR:
            raise ValueError(
                f"density matrix has negative eigenvalue {evals.min():.3e}"
            )
        pur = float(np.vdot(m, m).real)
        if not (0.0 < pur <= 1.0 + PURITY_TOL):
            raise ValueError(f"purity {pur:.15g} outside (0, 1]")
        object.__setattr__(self, "matrix", _readonly(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_pure(cls, psi: np.ndarray) -> "DensityMatrix":
        """Projector |psi><psi| / <psi|psi>."""
        v = np.asarray(psi, dtype=complex).ravel()
        n2 = float(np.vdot(v, v).real)
        if n2 <= 0.0:
            raise ValueError("zero state vector")
        return cls(np.outer(v, v.conj()) / n2)

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)


@dataclass(frozen=True)
class HamiltonianMatrix:
    """A Hermitian matrix generating unitary evolution."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if hermiticity_defect(m) > HERMITIAN_TOL:
            raise ValueError(
                f"Hamiltonian is not Hermitian: defect "
                f"{hermiticity_defect(m):.3e} > {HERMITIAN_TOL:.0e}"
            )
        object.__setattr__(self, "matrix", _readonly(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian
    matrix, with the reconstruction V diag(E) V^dag checked on construction."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    source: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.eigenvalues, dtype=float)
        v = np.asarray(self.eigenvectors, dtype=complex)
        src = as_matrix(self.source)
        gram = v.conj().T @ v
        if np.abs(gram - np.eye(v.shape[1])).max() > ORTHONORMALITY_TOL:
            raise ValueError("eigenvectors are not orthonormal")
        recon = (v * e) @ v.conj().T
        scale = max(np.linalg.norm(src), 1e-300)
        if np.linalg.norm(recon - src) / scale > RECONSTRUCTION_TOL:
            raise ValueError("spectral reconstruction exceeds tolerance")
        e = np.array(e, copy=True)
        e.setflags(write=False)
        object.__setattr__(self, "eigenvalues", e)
        object.__setattr__(self, "eigenvectors", _readonly(v))
        object.__setattr__(self, "source", _readonly(src))


def spectral_decomposition(a) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix (symmetrized first)."""
    m = as_matrix(a)
    if hermiticity_defect(m) > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian within tolerance")
    herm = (m + m.conj().T) / 2.0
    evals, evecs = np.linalg.eigh(herm)
    return SpectralDecomposition(evals, evecs, herm)


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product Tr(A^dag B)."""
    ma, mb = as_matrix(a), as_matrix(b)
    if ma.shape != mb.shape:
        raise ValueError(f"dimension mismatch: {ma.shape} vs {mb.shape}")
    return complex(np.vdot(ma, mb))


def purity(rho) -> float:
    """Tr(rho^2) for a Hermitian matrix."""
    m = as_matrix(rho)
    return float(np.vdot(m, m).real)


def relative_purity(rho0, rhot) -> float:
    """Overlap Tr(rho0 rhot) / Tr(rho0^2); equals 1 at rhot = rho0."""
    m0, mt = as_matrix(rho0), as_matrix(rhot)
    if m0.shape != mt.shape:
        raise ValueError(f"dimension mismatch: {m0.shape} vs {mt.shape}")
    denom = float(np.vdot(m0, m0).real)
    if denom <= 0.0:
        raise ValueError("zero initial purity")
    return float(np.vdot(m0.conj().T, mt).real) / denom


def commutator(h, rho) -> np.ndarray:
    """[H, rho] = H rho - rho H (anti-Hermitian, traceless)."""
    mh, mr = as_matrix(h), as_matrix(rho)
    if mh.shape != mr.shape:
        raise ValueError(f"dimension mismatch: {mh.shape} vs {mr.shape}")
    return mh @ mr - mr @ mh


def commutator_dispersion(h, rho, hbar: float = 1.0) -> float:
    """Evolution-rate scale (1/hbar) sqrt(-Tr([H,rho]^2) / Tr(rho^2)).

    -Tr([H,rho]^2) = ||[H,rho]||_HS^2 >= 0 since [H,rho] is anti-Hermitian;
    in the H eigenbasis it equals sum_{mn} (E_m - E_n)^2 |rho_mn|^2.
    """
    if hbar <= 0.0:
        raise ValueError("hbar must be positive")
    c = commutator(h, rho)
    num = float(np.vdot(c, c).real)  # = -Tr([H,rho]^2)
    den = purity(rho)
    if den <= 0.0:
        raise ValueError("zero purity")
    return float(np.sqrt(max(num, 0.0) / den)) / hbar


def matrix_power(rho, alpha: float) -> np.ndarray:
    """Spectral power rho^alpha with 0^alpha = 0.

    Requires alpha > 0.  Eigenvalues in [-1e-10, 0) are clamped to zero;
    anything below the floor is an error.  alpha = 1 returns the input
    matrix unchanged (bit-for-bit).
    """
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    m = as_matrix(rho)
    if hermiticity_defect(m) > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian within tolerance")
    if alpha == 1.0:
        return m
    evals, evecs = np.linalg.eigh((m + m.conj().T) / 2.0)
    if evals.min() < EIGENVALUE_FLOOR:
        raise ValueError(
            f"matrix power undefined: eigenvalue {evals.min():.3e} below floor"
        )
    clamped = np.where(evals < 0.0, 0.0, evals)
    powered = np.where(clamped > 0.0, clamped**alpha, 0.0)
    out = (evecs * powered) @ evecs.conj().T
    return (out + out.conj().T) / 2.0
