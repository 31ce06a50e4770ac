"""Wigner representation: the bridge between the matrix and phase-space routes.

A position-basis density matrix on a uniform grid is mapped to its Wigner
function by a discrete Fourier transform over the relative coordinate,

    W(q_i, p_k) = (1 / (pi hbar)) sum_m rho[i+m, i-m] exp(-i p_k s_m / hbar),

where s_m = 2 m dx is the relative-coordinate lattice (it only visits even
multiples of dx) and the momentum grid p_k = (k - N/2) dp with
dp = pi hbar / (N dx) is the exact Fourier dual of that lattice.  With these
conventions the mass, the position marginal and the Weyl-symbol scaling
a_W = 2 pi hbar W are exact discrete identities, and the trace-overlap
identity Tr(rho0 rho_t) = 2 pi hbar int W0 W_t dq dp is spectrally accurate.

The Moyal bracket is evaluated as the terminating sine series

    {{f, g}} = {f, g} - (hbar^2/24) Pi^3(f, g) + (hbar^4/1920) Pi^5(f, g),

exact for polynomial Hamiltonians of degree <= 6; Hamiltonian derivatives are
analytic and field derivatives spectral.  Quadratic Hamiltonians reproduce the
Poisson bracket bit-for-bit because the correction orders vanish identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curves import BoundCurve
from .hs import as_matrix, hermiticity_defect
from .liouville import (
    PhaseSpaceField,
    PhaseSpaceGrid,
    PolynomialHamiltonian,
    l2_inner,
    poisson_bracket,
    spectral_derivative,
)
from .qsl import _check_times, _overlap_curve

KERNEL_HERMITIAN_TOL = 1e-10
KERNEL_TRACE_TOL = 1e-10
KERNEL_BOUNDARY_TOL = 1e-10
REALITY_TOL = 1e-10
MASS_TOL = 1e-6
PURITY_TOL = 1e-6
ALIASING_TOL = 1e-8
_ALIASING_ROWS = 3
_SINE_SERIES = ((3, -1.0 / 24.0), (5, 1.0 / 1920.0))


class AliasingError(ValueError):
    """Momentum content of the state exceeds the grid's Nyquist window."""


@dataclass(frozen=True)
class PositionGrid:
    """Uniform cell-centered position grid with n points on [x_min, x_max]."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if self.x_max <= self.x_min:
            raise ValueError("grid extent must be positive")
        if self.n < 8 or self.n % 2 != 0:
            raise ValueError("n must be an even integer >= 8")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n) + 0.5) * self.dx


@dataclass(frozen=True)
class PositionBasisState:
    """Density matrix in the discrete position basis.

    ``rho_matrix[i, j]`` is the kernel rho(x_i, x_j) times dx, so the matrix
    has unit trace.  Hermiticity, trace and decay of the kernel at the grid
    boundary (|rho(x, x')| < 1e-10 on the outermost rows/columns) are
    validated on construction.
    """

    grid: PositionGrid
    rho_matrix: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        if self.hbar <= 0.0:
            raise ValueError("hbar must be positive")
        m = as_matrix(self.rho_matrix)
        if m.shape[0] != self.grid.n:
            raise ValueError(
                f"matrix dimension {m.shape[0]} does not match grid n={self.grid.n}"
            )
        if hermiticity_defect(m) > KERNEL_HERMITIAN_TOL:
            raise ValueError("position-basis state is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > KERNEL_TRACE_TOL:
            raise ValueError(f"trace {tr:.15g} is not 1")
        kernel_edge = max(
            float(np.abs(m[0, :]).max()),
            float(np.abs(m[-1, :]).max()),
            float(np.abs(m[:, 0]).max()),
            float(np.abs(m[:, -1]).max()),
        ) / self.grid.dx
        if kernel_edge > KERNEL_BOUNDARY_TOL:
            raise ValueError(
                f"state not contained in the box: kernel reaches "
                f"{kernel_edge:.3e} at the grid boundary"
            )
        frozen = np.array(m, dtype=complex, copy=True)
        frozen.setflags(write=False)
        object.__setattr__(self, "rho_matrix", frozen)


def state_from_wavefunction(
    grid: PositionGrid, psi: np.ndarray, hbar: float = 1.0
) -> PositionBasisState:
    """Pure state rho = |psi><psi| with discrete normalization sum |psi|^2 dx = 1."""
    v = np.asarray(psi, dtype=complex).ravel()
    if v.size != grid.n:
        raise ValueError("wavefunction length does not match grid")
    n2 = float(np.sum(np.abs(v) ** 2)) * grid.dx
    if n2 <= 0.0:
        raise ValueError("zero wavefunction")
    v = v / np.sqrt(n2)
    return PositionBasisState(grid, np.outer(v, v.conj()) * grid.dx, hbar)


def mixed_state(
    grid: PositionGrid,
    wavefunctions,
    weights,
    hbar: float = 1.0,
) -> PositionBasisState:
    """Convex mixture of pure states given as wavefunctions."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or len(wavefunctions) != w.size:
        raise ValueError("one weight per wavefunction required")
    if w.min() < 0.0 or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be a probability vector")
    m = np.zeros((grid.n, grid.n), dtype=complex)
    for wk, psi in zip(w, wavefunctions):
        v = np.asarray(psi, dtype=complex).ravel()
        v = v / np.sqrt(float(np.sum(np.abs(v) ** 2)) * grid.dx)
        m += wk * np.outer(v, v.conj()) * grid.dx
    return PositionBasisState(grid, m, hbar)


def coherent_state(
    grid: PositionGrid,
    q0: float,
    p0: float,
    hbar: float = 1.0,
    mass: float = 1.0,
    omega: float = 1.0,
) -> PositionBasisState:
    """Displaced oscillator ground state centered at (q0, p0)."""
    x = grid.centers
    psi = np.exp(
        -mass * omega * (x - q0) ** 2 / (2.0 * hbar) + 1j * p0 * x / hbar
    )
    return state_from_wavefunction(grid, psi, hbar)


def oscillator_eigenstate(
    grid: PositionGrid,
    level: int,
    hbar: float = 1.0,
    mass: float = 1.0,
    omega: float = 1.0,
) -> np.ndarray:
    """Harmonic-oscillator eigenfunction on the grid (stable Hermite recurrence).

    Returned unnormalized; feed to ``state_from_wavefunction`` or ``mixed_state``.
    """
    if level < 0:
        raise ValueError("level must be non-negative")
    xi = grid.centers * np.sqrt(mass * omega / hbar)
    phi_prev = np.zeros_like(xi)
    phi = np.pi**-0.25 * np.exp(-(xi**2) / 2.0)
    for k in range(level):
        phi, phi_prev = (
            np.sqrt(2.0 / (k + 1)) * xi * phi - np.sqrt(k / (k + 1.0)) * phi_prev,
            phi,
        )
    return phi


def thermal_oscillator_state(
    grid: PositionGrid,
    beta: float,
    hbar: float = 1.0,
    mass: float = 1.0,
    omega: float = 1.0,
) -> PositionBasisState:
    """Oscillator Gibbs mixture via the closed-form Gaussian kernel.

    rho(x, x') ~ exp(-a (x^2 + x'^2) + 2 b x x') with a = (m omega / 2 hbar)
    coth(beta hbar omega) and b = (m omega / 2 hbar) / sinh(beta hbar omega),
    normalized to unit trace on the grid.  Its Wigner function is a Gaussian
    with position variance (hbar / 2 m omega) coth(beta hbar omega / 2).
    """
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    theta = beta * hbar * omega
    coth = 1.0 / np.tanh(theta)
    # 1/sinh(theta) computed overflow-safely for large theta
    inv_sinh = 2.0 * np.exp(-theta) / (1.0 - np.exp(-2.0 * theta))
    scale = mass * omega / (2.0 * hbar)
    x = grid.centers
    expo = (
        -scale * coth * (x[:, None] ** 2 + x[None, :] ** 2)
        + 2.0 * scale * inv_sinh * x[:, None] * x[None, :]
    )
    kernel = np.exp(expo - expo.max())
    kernel = kernel / np.trace(kernel)
    return PositionBasisState(grid, kernel.astype(complex), hbar)


def gaussian_envelope_family(
    grid: PositionGrid,
    sigma_sq: float,
    mass: float = 1.0,
    omega: float = 1.0,
) -> Callable[[float], PositionBasisState]:
    """hbar-indexed Gibbs oscillator mixtures sharing one classical envelope.

    For each hbar the inverse temperature is chosen so the Wigner function is
    the same isotropic Gaussian with position variance sigma_sq:
    beta(hbar) = (2 / hbar omega) artanh(hbar / (2 m omega sigma_sq)).
    Requires sigma_sq > hbar / (2 m omega) (otherwise no mixed state has so
    small a phase-space footprint).
    """
    if sigma_sq <= 0.0:
        raise ValueError("sigma_sq must be positive")

    def family(hbar: float) -> PositionBasisState:
        ratio = hbar / (2.0 * mass * omega * sigma_sq)
        if ratio >= 1.0:
            raise ValueError(
                f"no mixed envelope: need sigma_sq > hbar/(2 m omega) "
                f"= {hbar / (2 * mass * omega):.6g}"
            )
        beta = 2.0 / (hbar * omega) * np.arctanh(ratio)
        return thermal_oscillator_state(grid, beta, hbar, mass, omega)

    return family


@dataclass(frozen=True)
class WignerField(PhaseSpaceField):
    """Real Wigner function on the Fourier-dual phase-space grid.

    Validated invariants: unit mass within 1e-6 and the purity inequality
    2 pi hbar int W^2 <= 1 + 1e-6.
    """

    hbar: float = 1.0

    def __post_init__(self):
        super().__post_init__()
        if self.hbar <= 0.0:
            raise ValueError("hbar must be positive")
        area = self.grid.cell_area
        mass = float(self.values.sum()) * area
        if abs(mass - 1.0) > MASS_TOL:
            raise ValueError(f"Wigner mass {mass:.12g} is not 1 within 1e-6")
        pur = 2.0 * np.pi * self.hbar * float(np.sum(self.values**2)) * area
        if pur > 1.0 + PURITY_TOL:
            raise ValueError(f"purity bound violated: 2 pi hbar int W^2 = {pur:.12g}")

    @property
    def purity(self) -> float:
        return 2.0 * np.pi * self.hbar * float(np.sum(self.values**2)) * self.grid.cell_area


def _relative_coordinate_rows(matrix: np.ndarray) -> np.ndarray:
    """C[i, m] = matrix[i+m, i-m] (zero off the grid), m centered."""
    n = matrix.shape[0]
    ii = np.arange(n)[:, None]
    mm = np.arange(-(n // 2), n // 2)[None, :]
    a = ii + mm
    b = ii - mm
    ok = (a >= 0) & (a < n) & (b >= 0) & (b < n)
    return np.where(ok, matrix[np.clip(a, 0, n - 1), np.clip(b, 0, n - 1)], 0.0)


def _dual_grid(grid: PositionGrid, hbar: float) -> tuple[PhaseSpaceGrid, float]:
    n = grid.n
    dp = np.pi * hbar / (n * grid.dx)
    p_min = -(n + 1) * dp / 2.0
    return (
        PhaseSpaceGrid(
            q_min=grid.x_min,
            q_max=grid.x_max,
            p_min=p_min,
            p_max=p_min + n * dp,
            nq=n,
            np=n,
        ),
        dp,
    )


def _relative_fourier(matrix: np.ndarray) -> np.ndarray:
    """sum_m C[i, m] exp(-2 pi i k m / N) with centered m and k."""
    c = _relative_coordinate_rows(matrix)
    return np.fft.fftshift(
        np.fft.fft(np.fft.ifftshift(c, axes=1), axis=1), axes=1
    )


def wigner_transform(state: PositionBasisState) -> WignerField:
    """Wigner function of a position-basis state on the Fourier-dual grid.

    Raises ``AliasingError`` when the momentum marginal fails to vanish on the
    outermost momentum rows (wrap-around conserves mass, so aliasing is not
    detectable from the mass alone).
    """
    n = state.grid.n
    spec = _relative_fourier(state.rho_matrix) / (np.pi * state.hbar)
    if float(np.abs(spec.imag).max()) > REALITY_TOL:
        raise ValueError(
            f"Wigner reality residual {np.abs(spec.imag).max():.3e} exceeds 1e-10"
        )
    w = spec.real
    grid2, dp = _dual_grid(state.grid, state.hbar)
    p_marginal = w.sum(axis=0) * state.grid.dx
    edge = float(
        np.abs(np.concatenate([p_marginal[:_ALIASING_ROWS], p_marginal[-_ALIASING_ROWS:]])).max()
    )
    if edge > ALIASING_TOL:
        raise AliasingError(
            f"aliasing: momentum marginal reaches {edge:.3e} at the Nyquist "
            f"edge (grid too coarse for the state's momentum support)"
        )
    return WignerField(grid2, w, state.hbar)


def weyl_symbol(kernel, grid: PositionGrid, hbar: float = 1.0) -> PhaseSpaceField:
    """Weyl symbol of an operator kernel sampled on the (x, x') grid.

    ``kernel[i, j]`` holds the kernel *values* A(x_i, x_j), with delta
    functions discretized on the relative-coordinate lattice of step 2 dx:
    delta(x - x') corresponds to the matrix I / (2 dx).  The symbol is the
    relative-coordinate quadrature

        a_W(q_i, p_k) = 2 dx sum_m A(x_{i+m}, x_{i-m}) exp(-i p_k s_m / hbar),

    so the identity kernel maps to the constant 1, x delta(x - x') to q, and
    a density matrix divided by dx to 2 pi hbar times its Wigner function.
    """
    if hbar <= 0.0:
        raise ValueError("hbar must be positive")
    m = as_matrix(kernel)
    if m.shape[0] != grid.n:
        raise ValueError("kernel dimension does not match grid")
    spec = _relative_fourier(m) * (2.0 * grid.dx)
    scale = max(float(np.abs(spec.real).max()), 1.0)
    if float(np.abs(spec.imag).max()) > REALITY_TOL * scale:
        raise ValueError(
            "Weyl symbol has a non-real residual: kernel is not Hermitian"
        )
    grid2, _ = _dual_grid(grid, hbar)
    return PhaseSpaceField(grid2, spec.real)


def wigner_overlap(w0: WignerField, wt: WignerField) -> float:
    """Trace functional 2 pi hbar int W0 W_t dq dp = Tr(rho0 rho_t)."""
    if w0.grid != wt.grid:
        raise ValueError("Wigner fields live on different grids")
    if w0.hbar != wt.hbar:
        raise ValueError("Wigner fields carry different hbar")
    return 2.0 * np.pi * w0.hbar * l2_inner(w0, wt)


def polynomial_phase_space_field(
    poly: PolynomialHamiltonian, grid: PhaseSpaceGrid
) -> PhaseSpaceField:
    """Sample a polynomial observable's Weyl symbol on a phase-space grid."""
    qm, pm = grid.mesh()
    return PhaseSpaceField(grid, poly.evaluate(qm, pm))


def expectation_via_wigner(w: WignerField, a: PhaseSpaceField) -> float:
    """Phase-space expectation int W a_W dq dp of a polynomial observable."""
    if w.grid != a.grid:
        raise ValueError("observable sampled on a different grid")
    return float(np.sum(w.values * a.values)) * w.grid.cell_area


def _bidifferential_term(
    n: int,
    f_derivative: Callable[[int, int], np.ndarray],
    g_derivative: Callable[[int, int], np.ndarray],
) -> np.ndarray:
    """Pi^n(f, g) = sum_k (-1)^k C(n, k) (dq^{n-k} dp^k f)(dq^k dp^{n-k} g).

    ``f_derivative(a, b)`` must return d^{a+b} f / dq^a dp^b on the grid.
    Pi^1 is the Poisson bracket; odd orders are antisymmetric under f <-> g.
    """
    out: np.ndarray | None = None
    for k in range(n + 1):
        term = (
            math.comb(n, k)
            * (-1.0) ** k
            * f_derivative(n - k, k)
            * g_derivative(k, n - k)
        )
        out = term if out is None else out + term
    return out


def moyal_bracket(
    h: PolynomialHamiltonian,
    w: PhaseSpaceField,
    hbar: float | None = None,
) -> PhaseSpaceField:
    """Moyal bracket {{H, W}} as the terminating sine series.

    {{H, W}} = {H, W} - (hbar^2/24) Pi^3(H, W) + (hbar^4/1920) Pi^5(H, W).
    The series is exact for polynomial H of degree <= 6 (all higher
    bidifferential orders annihilate H).  Correction orders whose Hamiltonian
    derivatives vanish identically are skipped, so quadratic Hamiltonians
    return the Poisson bracket bit-for-bit.
    """
    if hbar is None:
        hbar = getattr(w, "hbar", None)
        if hbar is None:
            raise ValueError("hbar not given and field carries none")
    if hbar <= 0.0:
        raise ValueError("hbar must be positive")
    whbar = getattr(w, "hbar", None)
    if whbar is not None and whbar != hbar:
        raise ValueError(f"hbar mismatch: field carries {whbar}, got {hbar}")
    base = poisson_bracket(h, w)
    qm, pm = w.grid.mesh()

    def h_derivative(a: int, b: int) -> np.ndarray:
        return h.derivative(a, b).evaluate(qm, pm)

    def w_derivative(a: int, b: int) -> np.ndarray:
        return spectral_derivative(w, a, b).values

    values = base.values
    for n, coeff in _SINE_SERIES:
        if all(h.derivative(n - k, k).is_zero for k in range(n + 1)):
            continue
        term = _bidifferential_term(n, h_derivative, w_derivative)
        values = values + coeff * hbar ** (n - 1) * term
    return PhaseSpaceField(w.grid, values)


def hamiltonian_matrix(
    poly: PolynomialHamiltonian, grid: PositionGrid, hbar: float = 1.0
) -> np.ndarray:
    """Position-basis matrix of a separable polynomial Hamiltonian.

    Pure-p terms become a circulant Fourier multiplier T(p) on the periodic
    grid (p = 2 pi hbar k / L); pure-q terms and the constant act diagonally.
    Mixed q^i p^j terms have no canonical ordering here and are rejected.
    """
    if hbar <= 0.0:
        raise ValueError("hbar must be positive")
    if not poly.is_separable:
        raise ValueError(
            "mixed q/p terms are not supported for matrix construction"
        )
    n = grid.n
    p = 2.0 * np.pi * hbar * np.fft.fftfreq(n, d=grid.dx)
    t_vals = np.zeros(n, dtype=float)
    v_vals = np.zeros(n, dtype=float)
    x = grid.centers
    for (i, j), c in poly.coefficients.items():
        if j > 0:
            t_vals += c * p**j
        else:
            v_vals += c * x**i
    col = np.fft.ifft(t_vals)
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    m = col[idx] + np.diag(v_vals.astype(complex))
    return (m + m.conj().T) / 2.0


def wigner_qsl_bound_curve(
    h: PolynomialHamiltonian,
    rho0: PositionBasisState,
    times,
) -> BoundCurve:
    """Speed-limit curve computed entirely in the Wigner representation.

    lhs(t) = int W0 W_t / int W0^2 with W_t the transform of the matrix-evolved
    state; the rate is the Moyal dispersion sqrt(int {{H, W0}}^2 / int W0^2).
    Agrees with the matrix-route curve to grid accuracy.
    """
    t = _check_times(times)
    hbar = rho0.hbar
    hm = hamiltonian_matrix(h, rho0.grid, hbar)
    evals, evecs = np.linalg.eigh(hm)
    s = evecs.conj().T @ rho0.rho_matrix @ evecs
    w0 = wigner_transform(rho0)
    n0 = l2_inner(w0, w0)
    mb = moyal_bracket(h, w0)
    dispersion = float(np.sqrt(l2_inner(mb, mb) / n0))
    lhs = np.empty(t.size, dtype=float)
    for k, tk in enumerate(t):
        if tk == 0.0:
            lhs[k] = l2_inner(w0, w0) / n0
            continue
        phase = np.exp(-1j * evals * tk / hbar)
        rho_t = evecs @ ((phase[:, None] * phase.conj()[None, :]) * s) @ evecs.conj().T
        state_t = PositionBasisState(
            rho0.grid, (rho_t + rho_t.conj().T) / 2.0, hbar
        )
        wt = wigner_transform(state_t)
        lhs[k] = l2_inner(w0, wt) / n0
    rhs = np.cos(dispersion * t)
    return BoundCurve.from_sides(t, lhs, rhs, dispersion)


@dataclass(frozen=True)
class HbarSweepResult:
    """Classical-limit convergence table over a descending hbar ladder.

    ``rate_gap`` is |Moyal rate - Poisson rate| on the same Wigner field
    (identically zero for quadratic Hamiltonians), ``lhs_gap`` the sup
    difference between the quantum overlap curve and the classical reference,
    and ``purity`` the column 2 pi hbar int W^2, strictly decreasing for a
    family approaching a square-integrable classical density.
    ``fitted_slope`` is the log-log slope of rate_gap vs hbar (None when the
    gap is exactly zero).
    """

    hbars: np.ndarray
    rate_gap: np.ndarray
    lhs_gap: np.ndarray
    purity: np.ndarray
    fitted_slope: float | None

    def __post_init__(self):
        for name in ("hbars", "rate_gap", "lhs_gap", "purity"):
            arr = np.array(getattr(self, name), dtype=float, copy=True)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def hbar_sweep(
    h: PolynomialHamiltonian,
    family: Callable[[float], PositionBasisState],
    hbars,
    times,
    classical_lhs,
) -> HbarSweepResult:
    """Quantify convergence to the classical speed limit as hbar decreases.

    Parameters
    ----------
    family : callable
        hbar -> PositionBasisState; a mixed-state family with a fixed
        classical envelope (see ``gaussian_envelope_family``).
    classical_lhs : array
        Classical overlap curve of the envelope on the same time grid
        (from ``csl_bound_curve``), used for the reported lhs gap.
    """
    t = _check_times(times)
    hb = np.asarray(hbars, dtype=float)
    if hb.ndim != 1 or hb.size < 2:
        raise ValueError("need at least two hbar values")
    if hb.min() <= 0.0 or not np.all(np.diff(hb) < 0.0):
        raise ValueError("hbars must be positive and strictly descending")
    cl = np.asarray(classical_lhs, dtype=float)
    if cl.shape != t.shape:
        raise ValueError("classical_lhs must match the time grid")
    rate_gap = np.empty(hb.size)
    lhs_gap = np.empty(hb.size)
    purity = np.empty(hb.size)
    for idx, hbar in enumerate(hb):
        state = family(float(hbar))
        w = wigner_transform(state)
        purity[idx] = w.purity
        n2 = l2_inner(w, w)
        mb = moyal_bracket(h, w)
        pb = poisson_bracket(h, w)
        rate_m = float(np.sqrt(l2_inner(mb, mb) / n2))
        rate_p = float(np.sqrt(l2_inner(pb, pb) / n2))
        rate_gap[idx] = abs(rate_m - rate_p)
        hm = hamiltonian_matrix(h, state.grid, float(hbar))
        curve = _overlap_curve(hm, state.rho_matrix, t, float(hbar))
        lhs_gap[idx] = float(np.abs(curve.lhs - cl).max())
    if not np.all(np.diff(purity) < 0.0):
        raise ValueError(
            "family does not approach a square-integrable classical limit: "
            "purity is not strictly decreasing along descending hbar"
        )
    slope: float | None
    if np.all(rate_gap > 0.0):
        slope = float(np.polyfit(np.log(hb), np.log(rate_gap), 1)[0])
    else:
        slope = None
    return HbarSweepResult(hb, rate_gap, lhs_gap, purity, slope)
