import math

import numpy as np
import pytest

from qvcs.quaternion import (
    SIGMA_0,
    SIGMA_1,
    SIGMA_3,
    Quaternion,
    QuaternionQ,
    sigma_n,
    su2_conjugated,
)


class TestSigmaN:
    def test_phi_zero_is_sigma3(self):
        assert np.array_equal(sigma_n(0.0, 1.3), np.diag([1.0 + 0j, -1.0]))

    def test_equator_is_sigma1(self):
        assert np.abs(sigma_n(math.pi / 2, 0.0) - SIGMA_1).max() < 1e-15

    def test_squares_to_identity(self):
        m = sigma_n(math.pi / 3, math.pi / 4)
        assert np.abs(m @ m - SIGMA_0).max() < 1e-14

    def test_hermitian(self):
        m = sigma_n(1.1, 2.3)
        assert np.abs(m - m.conj().T).max() == 0.0

    @pytest.mark.parametrize("phi,psi", [(-0.1, 0.0), (3.2, 0.0), (0.5, -0.2), (0.5, 6.3)])
    def test_rejects_out_of_range(self, phi, psi):
        with pytest.raises(ValueError):
            sigma_n(phi, psi)


class TestQuaternionMatrix:
    def test_pure_i_sigma3(self):
        q = Quaternion(1.0, math.pi / 2, 0.0, 0.0)
        assert np.abs(q.matrix() - 1j * SIGMA_3).max() < 1e-15

    def test_zero_modulus(self):
        q = Quaternion(0.0, 1.0, 1.0, 1.0)
        assert np.abs(q.matrix()).max() == 0.0

    def test_cartesian_parameterization_agrees(self):
        # (r=2, eta=pi/3, phi=pi/2, psi=0) has components (1, sqrt(3), 0, 0)
        q = Quaternion(2.0, math.pi / 3, math.pi / 2, 0.0)
        x0, x1, x2, x3 = q.cartesian()
        assert abs(x0 - 1.0) < 1e-14
        assert abs(x1 - math.sqrt(3.0)) < 1e-14
        assert abs(x2) < 1e-14
        assert abs(x3) < 1e-14
        cart = np.array(
            [[x0 + 1j * x3, -x2 + 1j * x1], [x2 + 1j * x1, x0 - 1j * x3]]
        )
        assert np.abs(q.matrix() - cart).max() < 1e-14

    def test_from_cartesian_round_trip(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            x = rng.normal(size=4)
            q = Quaternion.from_cartesian(*x)
            cart = np.array(
                [[x[0] + 1j * x[3], -x[1 + 1] + 1j * x[1]], [x[2] + 1j * x[1], x[0] - 1j * x[3]]]
            )
            assert np.abs(q.matrix() - cart).max() < 1e-13

    def test_rejects_negative_modulus(self):
        with pytest.raises(ValueError):
            Quaternion(-0.5, 0.0, 0.0, 0.0)

    def test_rejects_unwrapped_angles(self):
        with pytest.raises(ValueError):
            Quaternion(1.0, 7.0, 0.0, 0.0)


class TestQuaternionPower:
    def test_power_zero_is_identity(self):
        q = Quaternion(1.7, 0.3, 0.9, 1.2)
        assert np.array_equal(q.power(0), SIGMA_0)

    def test_i_sigma3_squared(self):
        q = Quaternion(1.0, math.pi / 2, 0.0, 0.0)
        assert np.abs(q.power(2) + SIGMA_0).max() < 1e-15

    def test_against_iterated_product(self):
        q = Quaternion(1.3, 0.7, 1.1, 2.0)
        oracle = np.linalg.matrix_power(q.matrix(), 7)
        assert np.abs(q.power(7) - oracle).max() < 1e-12

    def test_power_sweep_matches_products(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            r = rng.uniform(0.0, 1.5)
            q = Quaternion(
                r,
                rng.uniform(0.0, 2 * math.pi),
                rng.uniform(0.0, math.pi),
                rng.uniform(0.0, 2 * math.pi),
            )
            m = q.matrix()
            for n in (2, 13, 50):
                oracle = np.linalg.matrix_power(m, n)
                tol = 1e-10 * max(1.0, r) ** n
                assert np.abs(q.power(n) - oracle).max() <= tol

    def test_rejects_negative_exponent(self):
        with pytest.raises(ValueError):
            Quaternion(1.0, 0.0, 0.0, 0.0).power(-1)


class TestDagger:
    def test_real_quaternion_self_adjoint(self):
        q = Quaternion(1.2, 0.0, 0.7, 0.3)
        assert np.array_equal(q.dagger(), q.matrix())

    def test_pure_phase(self):
        q = Quaternion(1.0, math.pi / 2, 0.0, 0.0)
        assert np.abs(q.dagger() + 1j * SIGMA_3).max() < 1e-15

    def test_dagger_times_matrix_is_r_squared(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            r = rng.uniform(0.0, 2.0)
            q = Quaternion(
                r,
                rng.uniform(0.0, 2 * math.pi),
                rng.uniform(0.0, math.pi),
                rng.uniform(0.0, 2 * math.pi),
            )
            assert np.abs(q.dagger() @ q.matrix() - r * r * SIGMA_0).max() <= 1e-13

    def test_matrix_commutes_with_axis(self):
        q = Quaternion(1.4, 2.2, 0.8, 5.1)
        m, ax = q.matrix(), q.axis
        assert np.abs(m @ ax - ax @ m).max() <= 1e-14


class TestQuaternionQ:
    def test_matrix_form(self):
        qq = QuaternionQ(1.3, 0.8, 0.6, 2.1)
        expected = 1.3 * (math.cos(0.8) * SIGMA_0 + 1j * math.sin(0.8) * sigma_n(0.6, 2.1))
        assert np.abs(qq.matrix() - expected).max() < 1e-15

    def test_su2_factorization(self):
        # U diag(z, conj z) U^dag with both phase angles equal to varrho
        rng = np.random.default_rng(3)
        for _ in range(20):
            rt = rng.uniform(0.0, 1.5)
            th = rng.uniform(0.0, 2 * math.pi)
            phi = rng.uniform(0.0, math.pi)
            rho = rng.uniform(0.0, 2 * math.pi)
            qq = QuaternionQ(rt, th, phi, rho)
            z = rt * np.exp(1j * th)
            assert np.abs(su2_conjugated(z, rho, phi, rho) - qq.matrix()).max() <= 1e-12

    def test_power_matches_products(self):
        qq = QuaternionQ(1.1, 0.9, 0.7, 2.1)
        oracle = np.linalg.matrix_power(qq.matrix(), 9)
        assert np.abs(qq.power(9) - oracle).max() < 1e-12
