"""Scenario execution: dispatch by sector, CSV emission, summary text.

Outputs are deterministic for a fixed config and seed: CSV floats carry 12
significant digits, summaries contain no timestamps, and reruns are
byte-identical.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import ensembles
from .config import ScenarioConfig
from .curves import BoundCurve
from .hs import DensityMatrix, HamiltonianMatrix
from .liouville import (
    PhaseSpaceGrid,
    PolynomialHamiltonian,
    csl_bound_curve,
    alpha_csl_bound_curve,
    gaussian_density,
)
from .qsl import evolve, qsl_bound_curve, alpha_bound_curve
from .saturation import commutator_form_residual, saturating_hamiltonian
from .wigner import (
    PositionGrid,
    coherent_state,
    gaussian_envelope_family,
    hamiltonian_matrix,
    hbar_sweep,
    thermal_oscillator_state,
    wigner_qsl_bound_curve,
)

SLACK_TOL = {"quantum": 1e-9, "classical": 1e-3, "wigner": 1e-5}
MT_SATURATION_TOL = 1e-10
OBSTRUCTION_MIN = 1e-6
SLOPE_TARGET = 2.0
SLOPE_TOL = 0.2


def fmt(x) -> str:
    """12-significant-digit float formatting used in every output file."""
    return f"{float(x):.12g}"


@dataclass(frozen=True)
class ScenarioResult:
    name: str
    sector: str
    verdict: str
    summary: str
    files: tuple

    @property
    def exit_code(self) -> int:
        return 0 if self.verdict == "HOLDS" else 1


def _write_curve(path: Path, curve: BoundCurve) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "lhs", "rhs", "slack"])
        for k in range(curve.times.size):
            writer.writerow(
                [fmt(curve.times[k]), fmt(curve.lhs[k]), fmt(curve.rhs[k]), fmt(curve.slack[k])]
            )


def _write_convergence(path: Path, result) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["hbar", "rate_gap", "lhs_gap", "purity"])
        for k in range(result.hbars.size):
            writer.writerow(
                [
                    fmt(result.hbars[k]),
                    fmt(result.rate_gap[k]),
                    fmt(result.lhs_gap[k]),
                    fmt(result.purity[k]),
                ]
            )


def _times(cfg: ScenarioConfig) -> np.ndarray:
    return np.linspace(0.0, cfg.t_max, cfg.samples)


def _alpha_path(out: Path, alpha: float) -> Path:
    return out / f"bound_curve_alpha_{alpha:g}.csv"


def _quantum_initial_state(cfg: ScenarioConfig, h: HamiltonianMatrix) -> DensityMatrix:
    kind = cfg.initial_state["type"]
    if kind == "two_level_plus":
        if h.dim != 2:
            raise ValueError("two_level_plus needs a 2x2 system matrix")
        return DensityMatrix(np.full((2, 2), 0.5, dtype=complex))
    if kind == "pure_random":
        rng = np.random.default_rng(int(cfg.initial_state.get("seed", cfg.seed)))
        dim = int(cfg.initial_state.get("dim", h.dim))
        if dim != h.dim:
            raise ValueError("initial_state.dim does not match system matrix")
        return DensityMatrix.from_pure(ensembles.random_pure_state(dim, rng))
    if kind == "gibbs":
        beta = float(cfg.initial_state.get("beta", 1.0))
        return ensembles.gibbs_state(h, beta)
    raise ValueError(f"initial_state {kind!r} is not valid for the quantum sector")


def _run_quantum(cfg: ScenarioConfig, out: Path) -> ScenarioResult:
    h = HamiltonianMatrix(cfg.system_matrix)
    rho0 = _quantum_initial_state(cfg, h)
    times = _times(cfg)
    curve = qsl_bound_curve(h, rho0, times, cfg.hbar)
    files = [out / "bound_curve.csv"]
    _write_curve(files[0], curve)
    min_slack = curve.min_slack
    for alpha in cfg.alphas:
        ac = alpha_bound_curve(h, rho0, alpha, times, cfg.hbar)
        p = _alpha_path(out, alpha)
        _write_curve(p, ac)
        files.append(p)
        min_slack = min(min_slack, ac.min_slack)
    tol = SLACK_TOL["quantum"]
    verdict = "HOLDS" if min_slack >= -tol else "VIOLATED"
    summary = "\n".join(
        [
            f"scenario: {cfg.name}",
            "sector: quantum",
            f"dispersion: {fmt(curve.dispersion)}",
            f"min_slack: {fmt(min_slack)}",
            f"slack_tolerance: {tol:g}",
            f"verdict: {verdict}",
        ]
    )
    return ScenarioResult(cfg.name, "quantum", verdict, summary, tuple(files))


def _run_classical(cfg: ScenarioConfig, out: Path) -> ScenarioResult:
    poly = PolynomialHamiltonian(cfg.polynomial_terms)
    g = cfg.phase_grid
    grid = PhaseSpaceGrid(
        q_min=g["q_min"], q_max=g["q_max"], p_min=g["p_min"], p_max=g["p_max"],
        nq=g["nq"], np=g["np"],
        periodic_q=g.get("periodic_q", False), periodic_p=g.get("periodic_p", False),
    )
    state = cfg.initial_state
    if state["type"] != "gaussian":
        raise ValueError("classical sector requires a gaussian initial state")
    rho0 = gaussian_density(
        grid,
        float(state.get("q0", 0.0)),
        float(state.get("p0", 0.0)),
        float(state.get("sigma_q", 1.0)),
        float(state.get("sigma_p", 1.0)),
    )
    times = _times(cfg)
    curve = csl_bound_curve(poly, rho0, times, cfg.steps_per_unit_time)
    files = [out / "bound_curve.csv"]
    _write_curve(files[0], curve)
    min_slack = curve.min_slack
    for alpha in cfg.alphas:
        ac = alpha_csl_bound_curve(poly, rho0, alpha, times, cfg.steps_per_unit_time)
        p = _alpha_path(out, alpha)
        _write_curve(p, ac)
        files.append(p)
        min_slack = min(min_slack, ac.min_slack)
    tol = SLACK_TOL["classical"]
    verdict = "HOLDS" if min_slack >= -tol else "VIOLATED"
    summary = "\n".join(
        [
            f"scenario: {cfg.name}",
            "sector: classical",
            f"dispersion: {fmt(curve.dispersion)}",
            f"min_slack: {fmt(min_slack)}",
            f"slack_tolerance: {tol:g}",
            f"verdict: {verdict}",
        ]
    )
    return ScenarioResult(cfg.name, "classical", verdict, summary, tuple(files))


def _wigner_initial_state(cfg: ScenarioConfig, grid: PositionGrid):
    state = cfg.initial_state
    kind = state["type"]
    if kind == "coherent":
        return coherent_state(
            grid, float(state.get("q0", 0.0)), float(state.get("p0", 0.0)), cfg.hbar
        )
    if kind == "gibbs":
        return thermal_oscillator_state(grid, float(state.get("beta", 1.0)), cfg.hbar)
    raise ValueError(f"initial_state {kind!r} is not valid for the wigner sector")


def _run_wigner(cfg: ScenarioConfig, out: Path) -> ScenarioResult:
    poly = PolynomialHamiltonian(cfg.polynomial_terms)
    g = cfg.position_grid
    grid = PositionGrid(x_min=g["x_min"], x_max=g["x_max"], n=g["n"])
    rho0 = _wigner_initial_state(cfg, grid)
    times = _times(cfg)
    curve = wigner_qsl_bound_curve(poly, rho0, times)
    hm = hamiltonian_matrix(poly, grid, cfg.hbar)
    matrix_curve = qsl_bound_curve(
        hm, DensityMatrix(rho0.rho_matrix), times, cfg.hbar
    )
    route_gap = max(
        float(np.abs(curve.lhs - matrix_curve.lhs).max()),
        float(np.abs(curve.rhs - matrix_curve.rhs).max()),
    )
    files = [out / "bound_curve.csv"]
    _write_curve(files[0], curve)
    tol = SLACK_TOL["wigner"]
    verdict = "HOLDS" if curve.min_slack >= -tol and route_gap <= tol else "VIOLATED"
    summary = "\n".join(
        [
            f"scenario: {cfg.name}",
            "sector: wigner",
            f"dispersion: {fmt(curve.dispersion)}",
            f"min_slack: {fmt(curve.min_slack)}",
            f"matrix_route_gap: {fmt(route_gap)}",
            f"slack_tolerance: {tol:g}",
            f"verdict: {verdict}",
        ]
    )
    return ScenarioResult(cfg.name, "wigner", verdict, summary, tuple(files))


def _run_saturation(cfg: ScenarioConfig, out: Path) -> ScenarioResult:
    state = cfg.initial_state
    if state["type"] == "two_level_plus":
        psi = np.array([1.0, 0.0], dtype=complex)
        phi = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    elif state["type"] == "pure_random":
        rng = np.random.default_rng(int(state.get("seed", cfg.seed)))
        dim = int(state.get("dim", 2))
        psi = ensembles.random_pure_state(dim, rng)
        phi = ensembles.random_pure_state(dim, rng)
    else:
        raise ValueError(
            f"initial_state {state['type']!r} is not valid for the saturation sector"
        )
    sat = saturating_hamiltonian(psi, phi, cfg.omega)
    rho_psi = DensityMatrix.from_pure(psi)
    times = _times(cfg)
    curve = qsl_bound_curve(sat.matrix, rho_psi, times, cfg.hbar)
    survival = np.array(
        [
            float(np.abs(curve.lhs[k] - np.cos(cfg.omega * tk / cfg.hbar) ** 2))
            for k, tk in enumerate(times)
        ]
    )
    mt_residual = float(survival.max())
    interior = curve.slack[1:] if curve.slack.size > 1 else curve.slack
    res = commutator_form_residual(rho_psi, DensityMatrix.from_pure(phi), cfg.omega)
    files = [out / "bound_curve.csv"]
    _write_curve(files[0], curve)
    holds = (
        mt_residual <= MT_SATURATION_TOL
        and float(interior.min()) > 0.0
        and (res.degenerate or res.value > OBSTRUCTION_MIN)
    )
    verdict = "HOLDS" if holds else "VIOLATED"
    summary = "\n".join(
        [
            f"scenario: {cfg.name}",
            "sector: saturation",
            f"dispersion: {fmt(curve.dispersion)}",
            f"mt_saturation_residual: {fmt(mt_residual)}",
            f"min_interior_slack: {fmt(float(interior.min()))}",
            f"obstruction_residual: {fmt(res.value)}",
            f"obstruction_degenerate: {str(res.degenerate).lower()}",
            f"verdict: {verdict}",
        ]
    )
    return ScenarioResult(cfg.name, "saturation", verdict, summary, tuple(files))


def _run_hbar_sweep(cfg: ScenarioConfig, out: Path) -> ScenarioResult:
    poly = PolynomialHamiltonian(cfg.polynomial_terms)
    g = cfg.position_grid
    grid = PositionGrid(x_min=g["x_min"], x_max=g["x_max"], n=g["n"])
    family = gaussian_envelope_family(grid, cfg.envelope_sigma_sq)
    cg = cfg.classical_grid
    cgrid = PhaseSpaceGrid(
        q_min=cg["q_min"], q_max=cg["q_max"], p_min=cg["p_min"], p_max=cg["p_max"],
        nq=cg["nq"], np=cg["np"],
    )
    sigma = float(np.sqrt(cfg.envelope_sigma_sq))
    envelope = gaussian_density(cgrid, 0.0, 0.0, sigma, sigma)
    times = _times(cfg)
    classical = csl_bound_curve(poly, envelope, times, cfg.steps_per_unit_time)
    sweep = hbar_sweep(poly, family, cfg.hbars, times, classical.lhs)
    files = [out / "convergence.csv"]
    _write_convergence(files[0], sweep)
    if sweep.fitted_slope is None:
        slope_ok = bool(np.all(sweep.rate_gap == 0.0))
        slope_text = "exact-zero-gap"
    else:
        slope_ok = abs(sweep.fitted_slope - SLOPE_TARGET) <= SLOPE_TOL
        slope_text = fmt(sweep.fitted_slope)
    verdict = "HOLDS" if slope_ok else "VIOLATED"
    summary = "\n".join(
        [
            f"scenario: {cfg.name}",
            "sector: hbar_sweep",
            f"fitted_slope: {slope_text}",
            f"max_rate_gap: {fmt(float(sweep.rate_gap.max()))}",
            f"max_lhs_gap: {fmt(float(sweep.lhs_gap.max()))}",
            "purity_decreasing: true",
            f"verdict: {verdict}",
        ]
    )
    return ScenarioResult(cfg.name, "hbar_sweep", verdict, summary, tuple(files))


_SECTOR_RUNNERS = {
    "quantum": _run_quantum,
    "classical": _run_classical,
    "wigner": _run_wigner,
    "saturation": _run_saturation,
    "hbar_sweep": _run_hbar_sweep,
}


def run_scenario(cfg: ScenarioConfig, out_dir) -> ScenarioResult:
    """Execute one scenario, writing its CSV outputs and summary.txt."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = _SECTOR_RUNNERS[cfg.sector](cfg, out)
    (out / "summary.txt").write_text(result.summary + "\n")
    return ScenarioResult(
        result.name,
        result.sector,
        result.verdict,
        result.summary,
        result.files + (out / "summary.txt",),
    )
