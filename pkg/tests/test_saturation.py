"""Saturating generators and the commutator-form obstruction residual."""

import numpy as np
import pytest

from qslab import (
    SaturatingHamiltonian,
    commutator_form_residual,
    evolve,
    qsl_bound_curve,
    relative_purity,
    saturating_hamiltonian,
)

KET0 = np.array([1.0, 0.0])
KET1 = np.array([0.0, 1.0])
PLUS = np.array([1.0, 1.0]) / np.sqrt(2.0)


def random_unit(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


class TestConstruction:
    def test_two_level_example_is_sigma_y(self):
        h = saturating_hamiltonian(KET0, PLUS, omega=1.0)
        sigma_y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
        assert np.abs(h.matrix - sigma_y).max() < 1e-12
        assert h.dim == 2
        assert h.omega == 1.0

    def test_orthogonal_pair_maps_psi_to_i_phi(self):
        h = saturating_hamiltonian(KET0, KET1, omega=2.0)
        assert np.abs(h.matrix @ KET0 - 2.0j * KET1).max() < 1e-12

    def test_defining_relations_random_pairs(self):
        rng = np.random.default_rng(11)
        for dim in (2, 3, 5, 8):
            psi = random_unit(rng, dim)
            phi = random_unit(rng, dim)
            omega = 1.5
            h = saturating_hamiltonian(psi, phi, omega)
            hpsi = h.matrix @ psi
            # H psi is orthogonal to psi with norm omega, and H^2 psi =
            # omega^2 psi: psi lives in the driven two-plane.
            assert abs(np.vdot(psi, hpsi)) < 1e-12
            assert np.isclose(np.linalg.norm(hpsi), omega, atol=1e-12)
            assert np.abs(h.matrix @ hpsi - omega**2 * psi).max() < 1e-11

    def test_spectrum_and_rank(self):
        rng = np.random.default_rng(12)
        psi = random_unit(rng, 6)
        phi = random_unit(rng, 6)
        h = saturating_hamiltonian(psi, phi, omega=0.7)
        evals = np.linalg.eigvalsh(h.matrix)
        targets = np.array([-0.7, 0.0, 0.7])
        dist = np.abs(evals[:, None] - targets[None, :]).min(axis=1)
        assert dist.max() < 1e-10
        assert int(np.sum(np.abs(evals) > 1e-10)) == 2

    def test_colinear_pair_rejected(self):
        with pytest.raises(ValueError, match="colinear"):
            saturating_hamiltonian(KET0, KET0 * np.exp(0.3j))

    def test_unnormalized_rejected(self):
        with pytest.raises(ValueError, match="normalized"):
            saturating_hamiltonian(2.0 * KET0, PLUS)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            saturating_hamiltonian(KET0, np.array([1.0, 0.0, 0.0]))

    def test_nonpositive_omega_rejected(self):
        with pytest.raises(ValueError):
            saturating_hamiltonian(KET0, PLUS, omega=0.0)

    def test_wrapper_rejects_wrong_spectrum(self):
        with pytest.raises(ValueError, match="spectrum"):
            SaturatingHamiltonian(omega=1.0, matrix=np.diag([2.0, 0.0]))

    def test_wrapper_rejects_rank_three(self):
        with pytest.raises(ValueError, match="rank"):
            SaturatingHamiltonian(omega=1.0, matrix=np.diag([1.0, 1.0, -1.0]))

    def test_wrapper_rejects_non_hermitian(self):
        m = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(ValueError, match="Hermitian"):
            SaturatingHamiltonian(omega=1.0, matrix=m)


class TestSaturatingDynamics:
    def test_survival_closed_form(self):
        rng = np.random.default_rng(21)
        for dim, hbar in ((2, 1.0), (5, 0.7)):
            psi = random_unit(rng, dim)
            phi = random_unit(rng, dim)
            omega = 1.3
            h = saturating_hamiltonian(psi, phi, omega)
            rho0 = np.outer(psi, psi.conj())
            times = np.linspace(0.0, 2.0, 41)
            survival = np.array([
                relative_purity(rho0, evolve(h.matrix, rho0, t, hbar=hbar))
                for t in times
            ])
            assert np.abs(survival - np.cos(omega * times / hbar) ** 2).max() < 1e-10

    def test_geodesic_reaches_target(self):
        # With a real overlap the flow passes through the target ray at
        # t* = arccos(<psi|phi>) / omega (the phase convention of tilde ties
        # the traversal phase to the overlap's phase).
        rng = np.random.default_rng(22)
        v = rng.standard_normal(4)
        w = rng.standard_normal(4)
        psi = v / np.linalg.norm(v)
        phi = w / np.linalg.norm(w)
        omega = 1.0
        h = saturating_hamiltonian(psi, phi, omega)
        t_star = np.arccos(float(np.vdot(psi, phi).real)) / omega
        rho_t = evolve(h.matrix, np.outer(psi, psi.conj()), t_star)
        target = np.outer(phi, phi.conj())
        assert np.abs(rho_t.matrix - target).max() < 1e-10

    def test_two_level_geodesic_hits_plus(self):
        h = saturating_hamiltonian(KET0, PLUS)
        rho_t = evolve(h.matrix, np.outer(KET0, KET0), np.pi / 4.0)
        assert np.abs(rho_t.matrix - np.outer(PLUS, PLUS)).max() < 1e-12

    def test_interior_slack_is_strictly_positive(self):
        # The pure-state overlap cos^2(omega t) stays above cos(sqrt(2)
        # omega t) strictly on the open interior: the flow saturates only
        # the endpoints of the Hilbert-Schmidt bound.
        h = saturating_hamiltonian(KET0, PLUS)
        rho0 = np.outer(KET0, KET0)
        times = np.linspace(0.0, np.pi / np.sqrt(2.0), 61)
        curve = qsl_bound_curve(h.matrix, rho0, times)
        assert np.isclose(curve.dispersion, np.sqrt(2.0), atol=1e-12)
        assert curve.slack[0] < 1e-14
        assert curve.slack[1:].min() > 0.0
        assert curve.slack[30] > 0.1
        assert np.abs(curve.lhs - np.cos(times) ** 2).max() < 1e-12

    def test_small_time_slack_quartic_law(self):
        # cos^2(x) - cos(sqrt(2) x) = x^4 / 6 + O(x^6)
        h = saturating_hamiltonian(KET0, PLUS)
        rho0 = np.outer(KET0, KET0)
        t = 0.025
        curve = qsl_bound_curve(h.matrix, rho0, np.array([0.0, t]))
        assert np.isclose(curve.slack[1], t**4 / 6.0, rtol=1e-3)


class TestObstructionResidual:
    def test_zero_plus_pair_value(self):
        rho0 = np.outer(KET0, KET0)
        rhot = np.outer(PLUS, PLUS)
        out = commutator_form_residual(rho0, rhot)
        assert np.isclose(out.value, 1.0 / np.sqrt(3.0), atol=1e-12)
        assert not out.degenerate

    def test_identical_pair_is_degenerate(self):
        rho0 = np.outer(PLUS, PLUS)
        out = commutator_form_residual(rho0, rho0)
        assert out.value == 0.0
        assert out.degenerate

    def test_matches_hand_formula(self):
        rng = np.random.default_rng(31)
        for dim in (2, 4, 7):
            a = random_unit(rng, dim)
            b = random_unit(rng, dim)
            rho0 = 0.6 * np.outer(a, a.conj()) + 0.4 * np.outer(b, b.conj())
            c = random_unit(rng, dim)
            rhot = 0.5 * np.outer(b, b.conj()) + 0.5 * np.outer(c, c.conj())
            omega = 1.9
            n0 = float(np.trace(rho0 @ rho0).real)
            nt = float(np.trace(rhot @ rhot).real)
            ov = float(np.trace(rho0 @ rhot).real)
            expected = omega * abs(n0 - ov) / np.sqrt(n0 * nt - ov**2)
            out = commutator_form_residual(rho0, rhot, omega)
            assert np.isclose(out.value, expected, rtol=1e-12)

    def test_generic_pairs_are_obstructed(self):
        rng = np.random.default_rng(32)
        for _ in range(100):
            dim = int(rng.integers(2, 9))
            a = random_unit(rng, dim)
            b = random_unit(rng, dim)
            out = commutator_form_residual(
                np.outer(a, a.conj()), np.outer(b, b.conj())
            )
            assert out.degenerate or out.value > 1e-6

    def test_unitary_invariance(self):
        rng = np.random.default_rng(33)
        a = random_unit(rng, 5)
        b = random_unit(rng, 5)
        rho0 = np.outer(a, a.conj())
        rhot = np.outer(b, b.conj())
        base = commutator_form_residual(rho0, rhot).value
        q, _ = np.linalg.qr(rng.standard_normal((5, 5))
                            + 1j * rng.standard_normal((5, 5)))
        rotated = commutator_form_residual(
            q @ rho0 @ q.conj().T, q @ rhot @ q.conj().T
        ).value
        assert np.isclose(rotated, base, rtol=1e-10)

    def test_scales_linearly_in_omega(self):
        rho0 = np.outer(KET0, KET0)
        rhot = np.outer(PLUS, PLUS)
        one = commutator_form_residual(rho0, rhot, omega=1.0).value
        three = commutator_form_residual(rho0, rhot, omega=3.0).value
        assert np.isclose(three, 3.0 * one, rtol=1e-12)

    def test_saturating_flow_closed_form(self):
        # Even the geodesic flow carries a nonzero interior obstruction:
        # residual(t) = omega sin(omega t) / sqrt(1 + cos^2(omega t)),
        # matching the strictly positive interior slack.
        psi, phi = KET0, PLUS
        h = saturating_hamiltonian(psi, phi)
        rho0 = np.outer(psi, psi.conj())
        for t in (0.3, 0.7, 1.1):
            rhot = evolve(h.matrix, rho0, t)
            out = commutator_form_residual(rho0, rhot)
            expected = np.sin(t) / np.sqrt(1.0 + np.cos(t) ** 2)
            assert np.isclose(out.value, expected, atol=1e-10)

    def test_dimension_mismatch_raises(self):
        with pytest.raises(ValueError):
            commutator_form_residual(np.eye(2) / 2.0, np.eye(3) / 3.0)

    def test_nonpositive_omega_raises(self):
        with pytest.raises(ValueError):
            commutator_form_residual(np.eye(2) / 2.0, np.eye(2) / 2.0, omega=-1.0)
