"""Quantum speed limit on relative purity.

The normalized overlap Tr(rho0 rho_t)/Tr(rho0^2) of a unitarily evolved state
with its initial condition is bounded below by cos(Delta * t), where Delta is
the commutator dispersion (1/hbar) sqrt(-Tr([H, rho0]^2)/Tr(rho0^2)).  This
module evolves states spectrally and samples both sides of that bound, the
sigma = rho0^alpha generalization, the pure-state comparison of the
overlap-based bound with the Mandelstam-Tamm cosine-squared curve, and the
Mandelstam-Tamm / Margolus-Levitin orthogonalization times.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import BoundCurve
from .hs import (
    DensityMatrix,
    as_matrix,
    commutator_dispersion,
    hermiticity_defect,
    HERMITIAN_TOL,
    matrix_power,
)

STATIONARY_TOL = 1e-12


def _check_times(times) -> np.ndarray:
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("times must be a non-empty 1-d array")
    if t[0] != 0.0:
        raise ValueError("times must start at 0")
    if t.size > 1 and not np.all(np.diff(t) > 0.0):
        raise ValueError("times must be strictly ascending")
    return t


def evolve(h, rho0, t: float, hbar: float = 1.0) -> DensityMatrix:
    """Unitary evolution U(t) rho0 U(t)^dag with U = exp(-i H t / hbar).

    Computed through the eigendecomposition of H; preserves trace, purity and
    the spectrum of rho0 to round-off.  t = 0 returns rho0 unchanged.
    """
    if hbar <= 0.0:
        raise ValueError("hbar must be positive")
    mh = as_matrix(h)
    mr = as_matrix(rho0)
    if mh.shape != mr.shape:
        raise ValueError(f"dimension mismatch: {mh.shape} vs {mr.shape}")
    if t == 0.0:
        return DensityMatrix(mr)
    if hermiticity_defect(mh) > HERMITIAN_TOL:
        raise ValueError("Hamiltonian is not Hermitian within tolerance")
    evals, evecs = np.linalg.eigh((mh + mh.conj().T) / 2.0)
    phase = np.exp(-1j * evals * t / hbar)
    rt = evecs @ ((phase[:, None] * phase.conj()[None, :]) * (evecs.conj().T @ mr @ evecs)) @ evecs.conj().T
    return DensityMatrix((rt + rt.conj().T) / 2.0)


def _overlap_curve(h, sigma0, times: np.ndarray, hbar: float) -> BoundCurve:
    """Bound curve for an arbitrary Hermitian, positive sigma0.

    Works in the H eigenbasis, where conjugation by U(t) is an elementwise
    phase: Tr(sigma0 sigma_t) = sum_{mn} |S_mn|^2 cos((E_m - E_n) t / hbar)
    with S the transformed sigma0.  Identical to evolving with ``evolve`` and
    tracing, but O(d^2) per time sample.
    """
    mh = as_matrix(h)
    ms = as_matrix(sigma0)
    if mh.shape != ms.shape:
        raise ValueError(f"dimension mismatch: {mh.shape} vs {ms.shape}")
    if hermiticity_defect(mh) > HERMITIAN_TOL:
        raise ValueError("Hamiltonian is not Hermitian within tolerance")
    if hbar <= 0.0:
        raise ValueError("hbar must be positive")
    evals, evecs = np.linalg.eigh((mh + mh.conj().T) / 2.0)
    s = evecs.conj().T @ ms @ evecs
    weights = np.abs(s) ** 2
    norm2 = float(np.sum(weights))
    if norm2 <= 0.0:
        raise ValueError("zero-norm initial matrix")
    gaps = evals[:, None] - evals[None, :]
    dispersion = float(np.sqrt(np.sum(weights * gaps**2) / norm2)) / hbar
    lhs = np.array(
        [np.sum(weights * np.cos(gaps * (tk / hbar))) / norm2 for tk in times]
    )
    rhs = np.cos(dispersion * times)
    return BoundCurve.from_sides(times, lhs, rhs, dispersion)


def qsl_bound_curve(h, rho0, times, hbar: float = 1.0) -> BoundCurve:
    """Relative-purity curve of rho0 under H against its cosine bound."""
    t = _check_times(times)
    rho0 = DensityMatrix(as_matrix(rho0)) if not isinstance(rho0, DensityMatrix) else rho0
    return _overlap_curve(h, rho0.matrix, t, hbar)


def alpha_bound_curve(h, rho0, alpha: float, times, hbar: float = 1.0) -> BoundCurve:
    """Bound curve for the unnormalized power sigma0 = rho0^alpha.

    alpha = 1 reproduces ``qsl_bound_curve`` bit-for-bit (the power is the
    identity map there and both routes share one code path).
    """
    t = _check_times(times)
    sigma0 = matrix_power(as_matrix(rho0), alpha)
    return _overlap_curve(h, sigma0, t, hbar)


@dataclass(frozen=True)
class PureBoundComparison:
    """Pointwise comparison of the two pure-state decay curves.

    For a pure state, the relative purity equals |<psi0|psi_t>|^2, which the
    Mandelstam-Tamm analysis bounds by cos^2(x) while the overlap route gives
    cos(sqrt(2) x), with x = DeltaE * t / hbar.  cos^2(x) >= cos(sqrt(2) x)
    on [0, pi/2] with equality only at x = 0, so the overlap bound is never
    saturated by unitary pure-state dynamics.
    """

    x: np.ndarray
    mt_bound: np.ndarray
    hs_bound: np.ndarray
    difference: np.ndarray

    def __post_init__(self):
        for name in ("x", "mt_bound", "hs_bound", "difference"):
            arr = np.array(getattr(self, name), dtype=float, copy=True)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def pure_bound_comparison(x) -> PureBoundComparison:
    """Tabulate cos^2(x), cos(sqrt(2) x) and their difference on [0, pi/2]."""
    xv = np.asarray(x, dtype=float)
    if xv.ndim != 1:
        raise ValueError("x must be a 1-d array")
    if xv.size and (xv.min() < 0.0 or xv.max() > np.pi / 2):
        raise ValueError("x must lie in [0, pi/2]")
    mt = np.cos(xv) ** 2
    hs = np.cos(np.sqrt(2.0) * xv)
    diff = mt - hs
    if diff.size and diff.min() < -1e-12:
        raise RuntimeError("cos^2(x) < cos(sqrt(2)x) on [0, pi/2]")
    return PureBoundComparison(xv, mt, hs, diff)


@dataclass(frozen=True)
class OrthogonalizationBounds:
    """Mandelstam-Tamm and Margolus-Levitin lower bounds on the time to reach
    an orthogonal state, and their maximum."""

    mt: float
    ml: float
    combined: float

    def __post_init__(self):
        if not (self.mt > 0.0 and self.ml > 0.0):
            raise ValueError("orthogonalization times must be positive")
        if self.combined != max(self.mt, self.ml):
            raise ValueError("combined bound must equal max(mt, ml)")


def orthogonalization_bounds(h, psi, hbar: float = 1.0) -> OrthogonalizationBounds:
    """MT bound pi*hbar/(2 DeltaE) and ML bound pi*hbar/(2 (<E> - E_ground)).

    Raises for stationary states (either energy scale vanishing), which never
    orthogonalize.
    """
    if hbar <= 0.0:
        raise ValueError("hbar must be positive")
    mh = as_matrix(h)
    v = np.asarray(psi, dtype=complex).ravel()
    if v.size != mh.shape[0]:
        raise ValueError("state dimension does not match Hamiltonian")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-12:
        raise ValueError("psi must be normalized")
    if hermiticity_defect(mh) > HERMITIAN_TOL:
        raise ValueError("Hamiltonian is not Hermitian within tolerance")
    hv = mh @ v
    e_mean = float(np.vdot(v, hv).real)
    e2 = float(np.vdot(hv, hv).real)
    delta_e = float(np.sqrt(max(e2 - e_mean**2, 0.0)))
    e_ground = float(np.linalg.eigvalsh((mh + mh.conj().T) / 2.0).min())
    scale = max(float(np.linalg.norm(mh, 2)), 1.0)
    if delta_e <= STATIONARY_TOL * scale or (e_mean - e_ground) <= STATIONARY_TOL * scale:
        raise ValueError("stationary state, no orthogonalization")
    mt = np.pi * hbar / (2.0 * delta_e)
    ml = np.pi * hbar / (2.0 * (e_mean - e_ground))
    return OrthogonalizationBounds(mt=mt, ml=ml, combined=max(mt, ml))
