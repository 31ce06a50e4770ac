"""Hilbert-Schmidt state toolbox: algebraic identities and ensemble checks."""

import numpy as np
import pytest

import qslab
from qslab import (
    DensityMatrix,
    HamiltonianMatrix,
    commutator,
    commutator_dispersion,
    gibbs_state,
    hs_inner,
    matrix_power,
    purity,
    random_density_matrix,
    random_hamiltonian,
    random_pure_state,
    relative_purity,
    spectral_decomposition,
)

PLUS_PROJECTOR = np.full((2, 2), 0.5)
DIAG_01 = np.diag([0.0, 1.0])


class TestDensityMatrix:
    def test_accepts_plus_projector(self):
        rho = DensityMatrix(PLUS_PROJECTOR)
        assert rho.dim == 2
        assert np.isclose(purity(rho), 1.0, atol=1e-14)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.array([[0.5, 0.4], [0.1, 0.5]]))

    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.diag([0.7, 0.7]))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.diag([1.2, -0.2]))

    def test_matrix_is_frozen(self):
        rho = DensityMatrix(np.diag([0.6, 0.4]))
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 0.9


class TestHsInner:
    def test_unit_trace_against_identity(self):
        rho = DensityMatrix(np.diag([0.3, 0.7]))
        assert np.isclose(hs_inner(np.eye(2), rho), 1.0, atol=1e-14)

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(11)
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        assert np.isclose(hs_inner(a, b), np.conj(hs_inner(b, a)), atol=1e-13)

    def test_sesquilinearity(self):
        rng = np.random.default_rng(12)
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        c = rng.normal(size=(3, 3))
        z = 0.7 - 0.2j
        lhs = hs_inner(a, z * b + c)
        assert np.isclose(lhs, z * hs_inner(a, b) + hs_inner(a, c), atol=1e-12)

    def test_positive_on_self(self):
        rng = np.random.default_rng(13)
        a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        val = hs_inner(a, a)
        assert abs(val.imag) < 1e-13
        assert val.real > 0.0


class TestRelativePurity:
    def test_equals_one_at_identity(self):
        rho = DensityMatrix(np.diag([0.5, 0.3, 0.2]))
        assert relative_purity(rho, rho) == 1.0

    def test_orthogonal_pure_states(self):
        rho0 = DensityMatrix(np.diag([1.0, 0.0]))
        rho1 = DensityMatrix(np.diag([0.0, 1.0]))
        assert np.isclose(relative_purity(rho0, rho1), 0.0, atol=1e-14)

    def test_matches_trace_formula(self):
        rng = np.random.default_rng(14)
        a = random_density_matrix(4, rng)
        b = random_density_matrix(4, rng)
        expected = np.trace(a.matrix @ b.matrix).real / np.trace(
            a.matrix @ a.matrix
        ).real
        assert np.isclose(relative_purity(a, b), expected, atol=1e-13)


class TestMatrixPower:
    def test_scalar_square_roots(self):
        out = matrix_power(DensityMatrix(np.diag([0.9, 0.1])), 0.5)
        expected = np.diag([np.sqrt(0.9), np.sqrt(0.1)])
        assert np.allclose(out, expected, atol=1e-12)

    def test_alpha_one_is_bitwise_identity(self):
        rng = np.random.default_rng(15)
        rho = random_density_matrix(5, rng)
        out = matrix_power(rho, 1.0)
        assert np.array_equal(out, rho.matrix)

    def test_composition_of_powers(self):
        rng = np.random.default_rng(16)
        rho = random_density_matrix(6, rng)
        for a in (0.5, 1.0, 2.0):
            for b in (0.5, 1.0, 2.0):
                stepped = matrix_power(matrix_power(rho, a), b)
                direct = matrix_power(rho, a * b)
                assert np.allclose(stepped, direct, atol=1e-10)

    def test_projector_is_idempotent_under_power(self):
        rho = DensityMatrix(PLUS_PROJECTOR)
        assert np.allclose(matrix_power(rho, 3.7), rho.matrix, atol=1e-12)


class TestCommutator:
    def test_two_level_plus_example(self):
        out = commutator(DIAG_01, PLUS_PROJECTOR)
        expected = np.array([[0.0, -0.5], [0.5, 0.0]])
        assert np.allclose(out, expected, atol=1e-14)

    def test_trace_free(self):
        rng = np.random.default_rng(17)
        h = random_hamiltonian(6, rng)
        rho = random_density_matrix(6, rng)
        assert abs(np.trace(commutator(h, rho))) < 1e-12

    def test_anti_hermitian(self):
        rng = np.random.default_rng(18)
        h = random_hamiltonian(4, rng)
        rho = random_density_matrix(4, rng)
        c = commutator(h, rho)
        assert np.allclose(c.conj().T, -c, atol=1e-12)


class TestCommutatorDispersion:
    def test_two_level_plus_value(self):
        val = commutator_dispersion(HamiltonianMatrix(DIAG_01),
                                    DensityMatrix(PLUS_PROJECTOR))
        assert np.isclose(val, 1.0 / np.sqrt(2.0), atol=1e-14)

    def test_pure_state_identity(self):
        # For pure states -Tr[H,rho]^2 equals 2 (Delta E)^2.
        rng = np.random.default_rng(19)
        for dim in (2, 3, 5, 8):
            h = random_hamiltonian(dim, rng)
            psi = random_pure_state(dim, rng)
            rho = DensityMatrix(np.outer(psi, psi.conj()))
            de_sq = (psi.conj() @ h.matrix @ h.matrix @ psi).real - (
                psi.conj() @ h.matrix @ psi
            ).real ** 2
            assert np.isclose(
                commutator_dispersion(h, rho), np.sqrt(2.0 * de_sq), rtol=1e-12
            )

    def test_hbar_scaling(self):
        rng = np.random.default_rng(20)
        h = random_hamiltonian(4, rng)
        rho = random_density_matrix(4, rng)
        assert np.isclose(
            commutator_dispersion(h, rho, hbar=2.0),
            0.5 * commutator_dispersion(h, rho),
            rtol=1e-13,
        )

    def test_stationary_state_is_zero(self):
        h = HamiltonianMatrix(np.diag([0.0, 1.0, 2.5]))
        rho = gibbs_state(h, beta=1.3)
        assert commutator_dispersion(h, rho) < 1e-12


class TestGibbsState:
    def test_commutes_with_hamiltonian(self):
        rng = np.random.default_rng(21)
        h = random_hamiltonian(5, rng)
        rho = gibbs_state(h, beta=0.8)
        assert np.linalg.norm(commutator(h, rho)) < 1e-12

    def test_infinite_temperature_limit(self):
        h = HamiltonianMatrix(np.diag([0.0, 1.0, 2.0]))
        rho = gibbs_state(h, beta=1e-9)
        assert np.allclose(rho.matrix, np.eye(3) / 3.0, atol=1e-8)

    def test_zero_beta_is_maximally_mixed(self):
        rho = gibbs_state(HamiltonianMatrix(DIAG_01), beta=0.0)
        assert np.allclose(rho.matrix, np.eye(2) / 2.0, atol=1e-14)


class TestSpectralDecomposition:
    def test_reconstructs_source(self):
        rng = np.random.default_rng(22)
        h = random_hamiltonian(7, rng)
        dec = spectral_decomposition(h)
        rebuilt = dec.eigenvectors @ np.diag(dec.eigenvalues) @ dec.eigenvectors.conj().T
        assert np.allclose(rebuilt, h.matrix, atol=1e-12)

    def test_eigenvalues_ascending(self):
        rng = np.random.default_rng(23)
        dec = spectral_decomposition(random_hamiltonian(6, rng))
        assert np.all(np.diff(dec.eigenvalues) >= 0.0)


class TestRandomEnsembles:
    def test_density_matrices_are_states(self):
        rng = np.random.default_rng(24)
        for dim in (2, 3, 6, 11, 16):
            rho = random_density_matrix(dim, rng)
            m = rho.matrix
            assert np.allclose(m, m.conj().T, atol=1e-12)
            assert np.isclose(np.trace(m).real, 1.0, atol=1e-12)
            assert np.linalg.eigvalsh(m).min() > -1e-13
            assert 1.0 / dim <= purity(rho) <= 1.0 + 1e-12

    def test_rank_controlled_states(self):
        rng = np.random.default_rng(25)
        rho = random_density_matrix(6, rng, rank=2)
        evals = np.sort(np.linalg.eigvalsh(rho.matrix))
        assert np.all(np.abs(evals[:-2]) < 1e-12)

    def test_hamiltonians_hermitian(self):
        rng = np.random.default_rng(26)
        for dim in (2, 5, 9):
            h = random_hamiltonian(dim, rng)
            assert np.allclose(h.matrix, h.matrix.conj().T, atol=1e-13)

    def test_pure_states_normalized(self):
        rng = np.random.default_rng(27)
        for dim in (2, 4, 10):
            psi = random_pure_state(dim, rng)
            assert np.isclose(np.vdot(psi, psi).real, 1.0, atol=1e-12)

    def test_seeded_reproducibility(self):
        a = random_density_matrix(5, np.random.default_rng(99))
        b = random_density_matrix(5, np.random.default_rng(99))
        assert np.array_equal(a.matrix, b.matrix)


class TestPurity:
    def test_maximally_mixed(self):
        rho = DensityMatrix(np.eye(4) / 4.0)
        assert np.isclose(purity(rho), 0.25, atol=1e-14)

    def test_pure_is_one(self):
        rng = np.random.default_rng(28)
        psi = random_pure_state(6, rng)
        rho = DensityMatrix(np.outer(psi, psi.conj()))
        assert np.isclose(purity(rho), 1.0, atol=1e-12)
