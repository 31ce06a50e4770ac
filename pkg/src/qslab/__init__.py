"""Numerical laboratory for speed limits on relative purity.

Four computational sectors share one bound shape lhs(t) >= cos(rate * t):

* quantum: unitary density-matrix evolution in Hilbert-Schmidt space, with
  the commutator dispersion as the rate (``qsl_bound_curve``);
* classical: Liouville transport of phase-space densities, with the
  Poisson-bracket dispersion as the rate (``csl_bound_curve``);
* wigner: the same quantum bound rewritten through Wigner functions and the
  Moyal bracket, bridging the two (``wigner_qsl_bound_curve``, ``hbar_sweep``);
* saturation: the rank-two Hamiltonian that saturates the Mandelstam-Tamm
  pure-state bound, plus the trace residual showing the Hilbert-Schmidt
  bound cannot be saturated (``saturating_hamiltonian``,
  ``commutator_form_residual``).
"""

from .config import ConfigError, ScenarioConfig, load_scenario, scenario_from_dict
from .curves import BoundCurve
from .ensembles import (
    gibbs_state,
    random_density_matrix,
    random_hamiltonian,
    random_pure_state,
)
from .hs import (
    DensityMatrix,
    HamiltonianMatrix,
    SpectralDecomposition,
    commutator,
    commutator_dispersion,
    hs_inner,
    matrix_power,
    purity,
    relative_purity,
    spectral_decomposition,
)
from .liouville import (
    DomainTooSmallError,
    PhaseSpaceField,
    PhaseSpaceGrid,
    PolynomialHamiltonian,
    alpha_csl_bound_curve,
    csl_bound_curve,
    gaussian_density,
    l2_inner,
    liouville_evolve,
    liouvillian_dispersion,
    poisson_bracket,
    pointwise_power,
    spectral_derivative,
    write_field_csv,
)
from .qsl import (
    OrthogonalizationBounds,
    PureBoundComparison,
    alpha_bound_curve,
    evolve,
    orthogonalization_bounds,
    pure_bound_comparison,
    qsl_bound_curve,
)
from .runner import ScenarioResult, run_scenario
from .saturation import (
    ObstructionResidual,
    SaturatingHamiltonian,
    commutator_form_residual,
    saturating_hamiltonian,
)
from .verify import Check, VerificationReport, run_verification
from .wigner import (
    AliasingError,
    HbarSweepResult,
    PositionBasisState,
    PositionGrid,
    WignerField,
    coherent_state,
    expectation_via_wigner,
    gaussian_envelope_family,
    hamiltonian_matrix,
    hbar_sweep,
    mixed_state,
    moyal_bracket,
    oscillator_eigenstate,
    polynomial_phase_space_field,
    state_from_wavefunction,
    thermal_oscillator_state,
    weyl_symbol,
    wigner_overlap,
    wigner_qsl_bound_curve,
    wigner_transform,
)

__version__ = "0.1.0"

__all__ = [
    "AliasingError",
    "BoundCurve",
    "Check",
    "ConfigError",
    "DensityMatrix",
    "DomainTooSmallError",
    "HamiltonianMatrix",
    "HbarSweepResult",
    "ObstructionResidual",
    "OrthogonalizationBounds",
    "PhaseSpaceField",
    "PhaseSpaceGrid",
    "PolynomialHamiltonian",
    "PositionBasisState",
    "PositionGrid",
    "PureBoundComparison",
    "SaturatingHamiltonian",
    "ScenarioConfig",
    "ScenarioResult",
    "SpectralDecomposition",
    "VerificationReport",
    "WignerField",
    "alpha_bound_curve",
    "alpha_csl_bound_curve",
    "coherent_state",
    "commutator",
    "commutator_dispersion",
    "commutator_form_residual",
    "csl_bound_curve",
    "evolve",
    "expectation_via_wigner",
    "gaussian_density",
    "gaussian_envelope_family",
    "gibbs_state",
    "hamiltonian_matrix",
    "hbar_sweep",
    "hs_inner",
    "l2_inner",
    "liouville_evolve",
    "liouvillian_dispersion",
    "load_scenario",
    "matrix_power",
    "mixed_state",
    "moyal_bracket",
    "orthogonalization_bounds",
    "oscillator_eigenstate",
    "pointwise_power",
    "poisson_bracket",
    "polynomial_phase_space_field",
    "pure_bound_comparison",
    "purity",
    "qsl_bound_curve",
    "random_density_matrix",
    "random_hamiltonian",
    "random_pure_state",
    "relative_purity",
    "run_scenario",
    "run_verification",
    "saturating_hamiltonian",
    "scenario_from_dict",
    "spectral_decomposition",
    "spectral_derivative",
    "state_from_wavefunction",
    "thermal_oscillator_state",
    "weyl_symbol",
    "wigner_overlap",
    "wigner_qsl_bound_curve",
    "wigner_transform",
    "write_field_csv",
]
