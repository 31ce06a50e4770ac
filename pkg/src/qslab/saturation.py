"""Construction of overlap-bound-saturating Hamiltonians and the obstruction
residual that measures how far a state pair is from the commutator form such
saturation requires.

Given non-colinear unit vectors psi, phi, the rank-2 Hamiltonian
H = omega (|psi><tilde| + |tilde><psi|) with
|tilde> = i (phi - psi <psi|phi>) / sqrt(1 - |<psi|phi>|^2) drives psi along
the geodesic toward phi at the Mandelstam-Tamm-saturating rate: the survival
probability is exactly cos^2(omega t / hbar).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .hs import as_matrix, hermiticity_defect, HERMITIAN_TOL

CONSTRUCTION_TOL = 1e-12
EIGENVALUE_TOL = 1e-10
DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class SaturatingHamiltonian:
    """Rank <= 2 Hermitian generator with spectrum inside {-omega, 0, +omega}."""

    omega: float
    matrix: np.ndarray

    def __post_init__(self):
        if self.omega <= 0.0:
            raise ValueError("omega must be positive")
        m = as_matrix(self.matrix)
        if hermiticity_defect(m) > HERMITIAN_TOL:
            raise ValueError("saturating Hamiltonian is not Hermitian")
        evals = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
        targets = np.array([-self.omega, 0.0, self.omega])
        dist = np.abs(evals[:, None] - targets[None, :]).min(axis=1)
        if dist.max() > EIGENVALUE_TOL * max(self.omega, 1.0):
            raise ValueError(
                f"spectrum not contained in {{-omega, 0, omega}}: "
                f"worst deviation {dist.max():.3e}"
            )
        if int(np.sum(np.abs(evals) > EIGENVALUE_TOL * max(self.omega, 1.0))) > 2:
            raise ValueError("rank exceeds 2")
        frozen = np.array(m, dtype=complex, copy=True)
        frozen.setflags(write=False)
        object.__setattr__(self, "matrix", frozen)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def saturating_hamiltonian(psi, phi, omega: float = 1.0) -> SaturatingHamiltonian:
    """Build the geodesic-driving Hamiltonian for the pair (psi, phi).

    Verifies the defining relations <psi|tilde> = 0, <tilde|tilde> = 1,
    H psi = omega tilde and H tilde = omega psi to 1e-12.  Colinear pairs
    (|<psi|phi>| = 1) span no arc and are rejected.
    """
    if omega <= 0.0:
        raise ValueError("omega must be positive")
    v_psi = np.asarray(psi, dtype=complex).ravel()
    v_phi = np.asarray(phi, dtype=complex).ravel()
    if v_psi.shape != v_phi.shape:
        raise ValueError("psi and phi must share a dimension")
    for name, v in (("psi", v_psi), ("phi", v_phi)):
        if abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise ValueError(f"{name} must be normalized")
    overlap = complex(np.vdot(v_psi, v_phi))
    defect = 1.0 - abs(overlap) ** 2
    if defect <= 1e-12:
        raise ValueError("zero-length arc: psi and phi are colinear")
    tilde = 1j * (v_phi - v_psi * overlap) / np.sqrt(defect)
    if abs(np.vdot(v_psi, tilde)) > CONSTRUCTION_TOL:
        raise ValueError("construction failed: <psi|tilde> != 0")
    if abs(np.linalg.norm(tilde) - 1.0) > CONSTRUCTION_TOL:
        raise ValueError("construction failed: tilde not normalized")
    m = omega * (np.outer(v_psi, tilde.conj()) + np.outer(tilde, v_psi.conj()))
    if np.abs(m @ v_psi - omega * tilde).max() > CONSTRUCTION_TOL * max(omega, 1.0):
        raise ValueError("construction failed: H psi != omega tilde")
    if np.abs(m @ tilde - omega * v_psi).max() > CONSTRUCTION_TOL * max(omega, 1.0):
        raise ValueError("construction failed: H tilde != omega psi")
    return SaturatingHamiltonian(omega=omega, matrix=m)


class ObstructionResidual(NamedTuple):
    """Scalar obstruction with a flag marking a degenerate denominator."""

    value: float
    degenerate: bool


def commutator_form_residual(rho0, rhot, omega: float = 1.0) -> ObstructionResidual:
    """Trace obstruction to expressing the overlap derivative in the
    bound-saturating commutator form.

    residual = omega |Tr(rho0^2) - Tr(rho0 rhot)| /
               sqrt(Tr(rho0^2) Tr(rhot^2) - Tr(rho0 rhot)^2).

    A nonzero value certifies the pair admits no saturating generator of the
    commutator form.  rhot = rho0 (or any pair with a vanishing denominator)
    is flagged degenerate and returns 0 by convention.
    """
    if omega <= 0.0:
        raise ValueError("omega must be positive")
    m0 = as_matrix(rho0)
    mt = as_matrix(rhot)
    if m0.shape != mt.shape:
        raise ValueError(f"dimension mismatch: {m0.shape} vs {mt.shape}")
    n0 = float(np.vdot(m0, m0).real)
    nt = float(np.vdot(mt, mt).real)
    ov = float(np.vdot(m0.conj().T, mt).real)
    den = float(np.sqrt(max(n0 * nt - ov * ov, 0.0)))
    if den <= DEGENERATE_TOL:
        return ObstructionResidual(0.0, True)
    return ObstructionResidual(omega * abs(n0 - ov) / den, False)
