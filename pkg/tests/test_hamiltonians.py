import math

import numpy as np
import pytest

from qvcs.fock import FockTruncation, basis_index, interior_mask, restrict
from qvcs.hamiltonians import (
    ModelParams,
    build_dresselhaus_simple,
    build_h0,
    build_hamiltonian,
    build_rashba_simple,
    build_so_generalized,
    closed_form_eigenstates,
    closed_form_eigensystem,
    closed_form_spectrum,
    diagonalize,
    pair_by_overlap,
    passage_operator,
    susy_check,
    weak_coupling_model,
)

TRUNC = FockTruncation.standard(40)


class TestModelParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            ModelParams(omega_c=0.0)
        with pytest.raises(ValueError):
            ModelParams(omega_c=1.0, gauge="sideways")
        with pytest.raises(ValueError):
            ModelParams(omega_c=1.0, k=0)
        with pytest.raises(ValueError):
            ModelParams(omega_c=1.0, epsilon=2)

    def test_xi_eff_flips_with_gauge(self):
        assert ModelParams(omega_c=1.0, xi=0.25).xi_eff == 0.25
        assert ModelParams(omega_c=1.0, xi=0.25, gauge="minus_z").xi_eff == -0.25


class TestBuildH0:
    def test_plus_z_diagonal(self):
        p = ModelParams(omega_c=1.0, xi=0.25)
        h = build_h0(p, TRUNC)
        assert np.abs(h - np.diag(np.diag(h))).max() == 0.0
        for n in range(5):
            assert abs(h[basis_index(n, +1), basis_index(n, +1)] - (n + 0.25)) < 1e-13
            assert abs(h[basis_index(n, -1), basis_index(n, -1)] - (n + 0.75)) < 1e-13

    def test_zero_xi_degenerate_ladder(self):
        h = build_h0(ModelParams(omega_c=1.0), TRUNC)
        diag = np.real(np.diag(h))
        assert np.abs(diag[0::2] - diag[1::2]).max() == 0.0
        assert np.abs(diag[0::2] - (np.arange(41) + 0.5)).max() < 1e-13

    def test_minus_z_swaps_labels(self):
        plus = build_h0(ModelParams(omega_c=1.0, xi=0.25), TRUNC)
        minus = build_h0(ModelParams(omega_c=1.0, xi=0.25, gauge="minus_z"), TRUNC)
        dplus, dminus = np.real(np.diag(plus)), np.real(np.diag(minus))
        assert np.abs(dplus[0::2] - dminus[1::2]).max() < 1e-13
        # full spectra coincide (diagonalization oracle)
        assert np.abs(np.sort(dplus) - np.sort(dminus)).max() < 1e-13

    def test_both_gauges_match_formula(self):
        for gauge in ("plus_z", "minus_z"):
            p = ModelParams(omega_c=1.2, xi=-0.3, gauge=gauge)
            h = build_h0(p, TRUNC)
            for n in range(TRUNC.n_max + 1):
                for spin in (+1, -1):
                    expected = 1.2 * (n + 0.5) - spin * 1.2 * p.xi_eff
                    got = h[basis_index(n, spin), basis_index(n, spin)].real
                    assert abs(got - expected) <= 1e-13

    def test_requires_standard_weights(self):
        with pytest.raises(ValueError):
            build_h0(ModelParams(omega_c=1.0), FockTruncation.harmonic(4, 0.5))


class TestGeneralizedSO:
    def test_rashba_reduces_to_simple_form(self):
        p = ModelParams(omega_c=1.0, gamma=0.6, k=1, epsilon=-1)
        built = build_so_generalized(p, TRUNC, "rashba")
        assert np.abs(built.matrix - build_rashba_simple(p, TRUNC)).max() < 1e-14
        assert built.hermiticity_residual == 0.0

    def test_dresselhaus_reduces_to_simple_form(self):
        p = ModelParams(omega_c=1.0, beta=0.4, k=1, epsilon=+1)
        built = build_so_generalized(p, TRUNC, "dresselhaus")
        assert np.abs(built.matrix - build_dresselhaus_simple(p, TRUNC)).max() < 1e-14
        assert built.hermiticity_residual == 0.0

    def test_zero_coupling_gives_zero(self):
        p = ModelParams(omega_c=1.0, gamma=0.0)
        assert np.abs(build_so_generalized(p, TRUNC, "rashba").matrix).max() == 0.0

    def test_wrong_epsilon_reports_nonzero_residual(self):
        p = ModelParams(omega_c=1.0, gamma=0.6, epsilon=+1)
        assert build_so_generalized(p, TRUNC, "rashba").hermiticity_residual > 0.1

    def test_hermitian_for_any_lambda_with_matching_epsilon(self):
        lam = lambda n: (0.3 + 0.1 * n) * np.exp(0.2j * n)
        p = ModelParams(omega_c=1.0, gamma=0.5, k=2, epsilon=-1, lambda_spec=lam)
        assert build_so_generalized(p, TRUNC, "rashba").hermiticity_residual < 1e-14
        d = ModelParams(omega_c=1.0, beta=0.5, k=2, epsilon=+1, lambda_spec=lam)
        assert build_so_generalized(d, TRUNC, "dresselhaus").hermiticity_residual < 1e-14

    def test_vanishing_lambda_rejected(self):
        p = ModelParams(omega_c=1.0, gamma=0.5, lambda_spec=lambda n: 0.0 if n == 2 else 1.0)
        with pytest.raises(ValueError, match="nonvanishing"):
            build_so_generalized(p, TRUNC, "rashba")

    def test_simple_builders_bitwise_hermitian(self):
        p = ModelParams(omega_c=0.8, xi=0.1, gamma=0.3, beta=0.2)
        for h in (build_rashba_simple(p, TRUNC), build_dresselhaus_simple(p, TRUNC)):
            assert np.abs(h - h.conj().T).max() == 0.0


class TestClosedFormSpectrum:
    def test_zero_coupling(self):
        p = ModelParams(omega_c=1.0, xi=0.25, gamma=0.0)
        row = closed_form_spectrum(p, 3, "rashba")
        delta = 1.0 * (1 + 2 * 0.25)
        assert row.theta_n == 0.0
        assert abs(row.e_plus - (3 - delta / 2)) < 1e-14
        assert abs(row.e_minus - (3 + delta / 2)) < 1e-14

    def test_reference_point(self):
        # omega_c=1, xi=0.25, gamma=0.6, n=1: delta=1.5, E_pm = 1 -/+ 0.75*sqrt(1.64)
        p = ModelParams(omega_c=1.0, xi=0.25, gamma=0.6)
        row = closed_form_spectrum(p, 1, "rashba")
        assert abs(row.e_plus - (1 - 0.75 * math.sqrt(1.64))) < 1e-14
        assert abs(row.e_minus - (1 + 0.75 * math.sqrt(1.64))) < 1e-14

    def test_reference_point_against_oracle(self):
        p = ModelParams(omega_c=1.0, xi=0.25, gamma=0.6)
        h = build_hamiltonian(p, TRUNC)
        evals, _ = diagonalize(h)
        row = closed_form_spectrum(p, 1, "rashba")
        assert np.min(np.abs(evals - row.e_plus)) < 1e-10
        assert np.min(np.abs(evals - row.e_minus)) < 1e-10

    def test_strong_coupling_angle_limit(self):
        p = ModelParams(omega_c=1.0, xi=0.25, gamma=1e8)
        row = closed_form_spectrum(p, 1, "rashba")
        assert abs(row.theta_n - math.pi / 4) < 1e-6

    def test_degenerate_delta_is_limit_not_error(self):
        p = ModelParams(omega_c=1.0, xi=-0.5, gamma=0.6)  # delta = 0 for rashba
        row = closed_form_spectrum(p, 4, "rashba")
        assert row.theta_n == math.pi / 4
        assert abs(row.e_plus - (4 - 2 * 0.6)) < 1e-14

    def test_splitting_gap(self):
        p = ModelParams(omega_c=1.0, xi=0.25, gamma=0.6)
        r1 = closed_form_spectrum(p, 1, "rashba")
        r2 = closed_form_spectrum(p, 2, "rashba")
        assert abs(r1.delta_gap - (r1.e_minus - r2.e_plus)) < 1e-14

    def test_rejects_n_zero(self):
        with pytest.raises(ValueError):
            closed_form_spectrum(ModelParams(omega_c=1.0), 0, "rashba")


class TestClosedFormEigenstates:
    def test_zero_coupling_rashba(self):
        p = ModelParams(omega_c=1.0, xi=0.25, gamma=0.0)
        psi_p, psi_m = closed_form_eigenstates(p, 2, "rashba", TRUNC)
        assert abs(psi_p.coeffs[basis_index(1, +1)] - 1.0) < 1e-15
        assert abs(psi_m.coeffs[basis_index(2, -1)] - 1.0) < 1e-15

    def test_orthonormal(self):
        p = ModelParams(omega_c=1.0, xi=-0.3, gamma=0.7, beta=0.7)
        for branch in ("rashba", "dresselhaus"):
            psi_p, psi_m = closed_form_eigenstates(p, 5, branch, TRUNC)
            assert abs(psi_p.norm_sq() - 1.0) < 1e-14
            assert abs(psi_m.norm_sq() - 1.0) < 1e-14
            assert abs(psi_p.inner(psi_m)) < 1e-14

    @pytest.mark.parametrize("branch", ["rashba", "dresselhaus"])
    @pytest.mark.parametrize("coupling", [0.3, 0.6, -0.4])
    def test_eigenresidual(self, branch, coupling):
        kwargs = {"gamma": coupling} if branch == "rashba" else {"beta": coupling}
        p = ModelParams(omega_c=1.0, xi=0.25, **kwargs)
        h = build_hamiltonian(p, TRUNC)
        for n in range(1, TRUNC.n_max // 2):
            psi_p, psi_m = closed_form_eigenstates(p, n, branch, TRUNC)
            row = closed_form_spectrum(p, n, branch)
            rp = np.linalg.norm(h @ psi_p.coeffs - row.e_plus * psi_p.coeffs)
            rm = np.linalg.norm(h @ psi_m.coeffs - row.e_minus * psi_m.coeffs)
            assert rp <= 1e-10 and rm <= 1e-10

    def test_rejects_beyond_truncation(self):
        p = ModelParams(omega_c=1.0, gamma=0.5)
        with pytest.raises(ValueError):
            closed_form_eigenstates(p, TRUNC.n_max + 1, "rashba", TRUNC)


class TestDiagonalize:
    def test_diagonal_input_sorted(self):
        evals, _ = diagonalize(np.diag([3.0, 1.0, 2.0]).astype(complex))
        assert np.array_equal(evals, [1.0, 2.0, 3.0])

    def test_h0_spectrum_matches_formula(self):
        p = ModelParams(omega_c=1.0, xi=0.25)
        evals, _ = diagonalize(build_h0(p, TRUNC))
        expected = np.sort(
            np.concatenate([np.arange(41) + 0.25, np.arange(41) + 0.75])
        )
        assert np.abs(evals - expected).max() < 1e-13

    def test_rejects_non_hermitian(self):
        m = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(ValueError):
            diagonalize(m)

    def test_interior_eigenvalues_match_closed_form(self):
        p = ModelParams(omega_c=1.0, xi=0.25, gamma=0.6)
        evals, evecs = diagonalize(build_hamiltonian(p, TRUNC))
        for n in range(1, 30):
            row = closed_form_spectrum(p, n, "rashba")
            psi_p, psi_m = closed_form_eigenstates(p, n, "rashba", TRUNC)
            ip = pair_by_overlap(evals, evecs, psi_p.coeffs)
            im = pair_by_overlap(evals, evecs, psi_m.coeffs)
            assert abs(evals[ip] - row.e_plus) / (1 + abs(row.e_plus)) <= 1e-10
            assert abs(evals[im] - row.e_minus) / (1 + abs(row.e_minus)) <= 1e-10

    def test_degenerate_pairing_spans_subspace(self):
        # xi=-1/2 makes delta vanish; at gamma=0 each level is doubly degenerate
        p = ModelParams(omega_c=1.0, xi=-0.5, gamma=0.0)
        h = build_hamiltonian(p, TRUNC)
        evals, evecs = diagonalize(h)
        psi_p, psi_m = closed_form_eigenstates(p, 3, "rashba", TRUNC)
        ip = pair_by_overlap(evals, evecs, psi_p.coeffs)
        im = pair_by_overlap(evals, evecs, psi_m.coeffs)
        assert ip != im
        proj_closed = np.outer(psi_p.coeffs, psi_p.coeffs.conj()) + np.outer(
            psi_m.coeffs, psi_m.coeffs.conj()
        )
        vp, vm = evecs[:, ip], evecs[:, im]
        proj_oracle = np.outer(vp, vp.conj()) + np.outer(vm, vm.conj())
        assert np.abs(proj_closed - proj_oracle).max() <= 1e-9


class TestPassageOperator:
    def test_zero_coupling_is_identity(self):
        p = ModelParams(omega_c=1.0, xi=0.25, gamma=0.0)
        u, energies = closed_form_eigensystem(p, TRUNC, "rashba")
        assert np.abs(u - np.eye(TRUNC.spinor_dim)).max() < 1e-15
        h = build_hamiltonian(p, TRUNC)
        assert np.abs(np.diag(h).real - energies).max() < 1e-13

    @pytest.mark.parametrize("branch", ["rashba", "dresselhaus"])
    def test_unitarity_and_diagonalization(self, branch):
        kwargs = {"gamma": 0.6} if branch == "rashba" else {"beta": 0.6}
        p = ModelParams(omega_c=1.0, xi=0.25, **kwargs)
        u, energies = closed_form_eigensystem(p, TRUNC, branch)
        mask = interior_mask(TRUNC.n_max)
        gram = u.conj().T @ u
        assert np.abs(restrict(gram, mask) - np.eye(mask.sum())).max() <= 1e-10
        h = build_hamiltonian(p, TRUNC)
        hd = u.conj().T @ h @ u
        offdiag = hd - np.diag(np.diag(hd))
        assert np.abs(restrict(offdiag, mask)).max() <= 1e-9
        diag_err = np.abs(np.diag(hd).real - energies)[mask]
        assert diag_err.max() <= 1e-10

    def test_incomplete_eigenset_rejected(self):
        with pytest.raises(ValueError, match="eigenset"):
            passage_operator([np.zeros(4, dtype=complex)])


class TestWeakCoupling:
    def test_zero_gamma(self):
        wk = weak_coupling_model(ModelParams(omega_c=1.3, xi=0.2))
        assert wk.omega_plus == wk.omega_minus == 1.3
        assert wk.rho_plus(0) == 1.0 and wk.rho_minus(0) == 1.0
        assert abs(wk.rho_plus(3) - 6 * 1.3**3) < 1e-12

    def test_reference_frequencies(self):
        # omega_c=1, xi=0.25 gives gc=-1; gamma=0.1 shifts by 0.02/3
        wk = weak_coupling_model(ModelParams(omega_c=1.0, xi=0.25, gamma=0.1))
        assert wk.gc == -1.0
        assert abs(wk.omega_plus - (1 - 0.02 / 3)) < 1e-15
        assert abs(wk.omega_minus - (1 + 0.02 / 3)) < 1e-15
        assert abs(wk.omega_plus + wk.omega_minus - 2.0) < 1e-15

    def test_per_level_linearization(self):
        # E_pm(n) - (omega_c n -/+ delta/2) equals (omega_pm - omega_c) n up to O(gamma^4)
        gamma = 0.1
        p = ModelParams(omega_c=1.0, xi=0.25, gamma=gamma)
        wk = weak_coupling_model(p)
        delta = p.delta("rashba")
        for n in range(1, 20):
            row = closed_form_spectrum(p, n, "rashba")
            lin_p = row.e_plus - (1.0 * n - delta / 2)
            lin_m = row.e_minus - (1.0 * n + delta / 2)
            c4 = 2.0 * n * n / abs(delta) ** 3  # next expansion coefficient scale
            assert abs(lin_p - (wk.omega_plus - 1.0) * n) <= c4 * gamma**4
            assert abs(lin_m - (wk.omega_minus - 1.0) * n) <= c4 * gamma**4

    def test_singular_gc(self):
        with pytest.raises(ValueError, match="singular"):
            weak_coupling_model(ModelParams(omega_c=1.0, xi=-0.5))

    def test_level_energy_table(self):
        wk = weak_coupling_model(ModelParams(omega_c=1.0, xi=0.25, gamma=0.1))
        table = wk.level_energies(5)
        assert table.shape == (6, 2)
        assert abs(table[3, 0] - 3 * wk.omega_plus) < 1e-15


class TestSusy:
    @pytest.mark.parametrize("omega_c", [1.0, 0.8])
    def test_identities(self, omega_c):
        report = susy_check(ModelParams(omega_c=omega_c), TRUNC)
        assert report.anticommutator_residual == 0.0
        assert report.commutator_residual_interior <= 1e-13
        assert report.q_squared_norm == 0.0
