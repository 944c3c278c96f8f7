import math

import numpy as np
import pytest

from arczeta.errors import BoundaryError, ConvergenceError, InvalidParameterError
from arczeta.group import (
    CoverElement,
    DomainPoint,
    GroupElement,
    a_t,
    b_t,
    b_z,
    cartan_decompose,
    cpow_int,
    h_from_z,
    haar_unitary,
    random_group_element,
    sample_domain,
    theta_t,
    theta_z,
    unitary_completion,
)
from arczeta.weights import closed_S


class TestDistinguishedElements:
    def test_t_zero_all_identity(self):
        for fn in (a_t, theta_t, b_t):
            assert np.allclose(fn(0.0, 3), np.eye(4))

    def test_theta_b_product(self):
        t = 0.83
        prod = theta_t(t, 2) @ b_t(t, 2)
        expect = np.diag([1.0, 1.0, math.cosh(t) ** 2])
        assert np.allclose(prod, expect)

    def test_a_t_in_group(self):
        GroupElement(a_t(1.1, 2))  # must not raise

    def test_theta_z_n1(self):
        r = 0.4
        m = theta_z(np.array([r]))
        assert np.allclose(m, np.diag([math.sqrt(1 - r * r), 1 / math.sqrt(1 - r * r)]))

    def test_triangular_ratio_identities(self):
        rng = np.random.default_rng(3)
        z = 0.7 * rng.standard_normal(3) / 3 + 0.1j * rng.standard_normal(3)
        tz, bz = theta_z(z), b_z(z)
        n = 3
        gram = np.eye(n) - np.outer(z, z.conj())
        lhs = np.linalg.inv(tz) @ bz
        expect = np.zeros((4, 4), dtype=complex)
        expect[:n, :n] = np.linalg.inv(gram)
        expect[n, n] = 1.0
        assert np.allclose(lhs, expect)
        lhs2 = np.linalg.inv(tz) @ np.linalg.inv(bz)
        expect2 = np.eye(4, dtype=complex)
        expect2[n, n] = 1.0 - np.vdot(z, z)
        assert np.allclose(lhs2, expect2)

    def test_det_gram_equals_sech_squared(self):
        z = np.array([0.3 + 0.2j, -0.1j])
        t = math.atanh(np.linalg.norm(z))
        gram = np.eye(2) - np.outer(z, z.conj())
        assert math.isclose(np.linalg.det(gram).real, math.cosh(t) ** -2)


class TestHFromZ:
    def test_zero_is_identity(self):
        assert np.allclose(h_from_z(np.zeros(2)).matrix, np.eye(3))

    def test_n1_real_entries(self):
        r = 0.6
        m = h_from_z(np.array([r])).matrix
        c = 1 / math.sqrt(1 - r * r)
        assert np.allclose(m, [[c, r * c], [r * c, c]])

    def test_roundtrip_extraction(self, rng):
        for _ in range(20):
            z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            z *= rng.uniform(0, 0.9) / np.linalg.norm(z)
            h = h_from_z(z).matrix
            back = h[:3, 3] / h[3, 3]
            assert np.allclose(back, z, atol=1e-12)

    def test_boundary_rejected(self):
        with pytest.raises(BoundaryError):
            h_from_z(np.array([1.0 - 1e-12]))
        with pytest.raises(InvalidParameterError):
            DomainPoint(np.array([1.0]))


class TestCartan:
    def test_identity(self):
        z, t, k_z, k = cartan_decompose(np.eye(3))
        assert z.radius == 0 and t == 0
        assert np.allclose(k.embed(), np.eye(3))

    def test_hyperbolic_element(self):
        t0 = 0.9
        z, t, k_z, k = cartan_decompose(a_t(t0, 2))
        assert math.isclose(t, t0, rel_tol=1e-12)
        assert np.allclose(z.z, [math.tanh(t0), 0.0])
        assert np.allclose(k.embed(), np.eye(3), atol=1e-12)
        assert np.allclose(k_z.embed(), np.eye(3), atol=1e-12)

    def test_random_roundtrip(self, rng):
        for _ in range(1000):
            n = int(rng.integers(1, 4))
            g = random_group_element(n, rng)
            z, t, k_z, k = cartan_decompose(g)
            reassembled = h_from_z(z.z).matrix @ k.embed()
            assert np.max(np.abs(reassembled - g.matrix)) <= 1e-10
            # the rotation diagonalizes the positive factor
            h2 = k_z.embed() @ a_t(t, n) @ np.linalg.inv(k_z.embed())
            assert np.max(np.abs(h2 - h_from_z(z.z).matrix)) <= 1e-9

    def test_form_violation_rejected(self):
        with pytest.raises(InvalidParameterError):
            GroupElement(np.diag([1.0, 2.0]))


class TestCover:
    def test_zeta_consistency_enforced(self):
        with pytest.raises(InvalidParameterError):
            CoverElement(np.eye(2), 1.0, 2.0, 1.0)

    def test_flips_and_ratio(self, rng):
        c = CoverElement.from_blocks(haar_unitary(2, rng), np.exp(0.3j))
        assert np.isclose(c.flip_n().zeta_ratio, -c.zeta_ratio)
        assert np.isclose(c.flip_both().zeta_ratio, c.zeta_ratio)
        inv = c.inverse()
        assert np.isclose(inv.zeta_ratio * c.zeta_ratio, 1.0)

    def test_compose_threading(self, rng):
        a = CoverElement.from_blocks(haar_unitary(2, rng), np.exp(1j))
        b = CoverElement.from_blocks(haar_unitary(2, rng), np.exp(-0.4j))
        ab = a.compose(b)
        assert np.allclose(ab.block_n, a.block_n @ b.block_n)
        assert np.isclose(ab.zeta_n, a.zeta_n * b.zeta_n)


class TestHaar:
    def test_m1_uniform_phase(self, rng):
        u = haar_unitary(1, rng, size=40_000).reshape(-1)
        # circular mean of a uniform phase vanishes like 1/sqrt(N)
        assert abs(u.mean()) < 3.0 / math.sqrt(len(u))
        assert np.allclose(np.abs(u), 1.0)

    def test_columns_orthonormal(self, rng):
        q = haar_unitary(4, rng)
        assert np.max(np.abs(q.conj().T @ q - np.eye(4))) < 1e-12

    def test_standard_character_mean_zero(self, rng):
        for m in (2, 3):
            q = haar_unitary(m, rng, size=30_000)
            tr = np.trace(q, axis1=1, axis2=2)
            # Var(tr) = 1 for the invariant ensemble
            assert abs(tr.mean()) < 3.0 / math.sqrt(len(tr))

    def test_unitary_completion(self, rng):
        v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        v /= np.linalg.norm(v)
        q = unitary_completion(v)
        assert np.allclose(q[:, 0], v)
        assert np.max(np.abs(q.conj().T @ q - np.eye(3))) < 1e-12


class TestSampler:
    def test_weight_normalization_11(self, rng):
        # mean(w) -> vol = pi, mean with exponent 1 -> pi/2
        z0, w0 = sample_domain(1, 1, 0.0, rng, size=120_000)
        z1, w1 = sample_domain(1, 1, 1.0, rng, size=120_000)
        assert math.isclose(w0.mean(), math.pi, rel_tol=1e-12)  # constant weights
        assert math.isclose(w1.mean(), math.pi / 2, rel_tol=1e-12)

    def test_moment_ratio_matches_calculus(self, rng):
        # E[(1 - |z|^2)] under the flat weights = (pi/2) / pi
        z, w = sample_domain(1, 1, 0.0, rng, size=200_000)
        u = np.abs(z.reshape(-1)) ** 2
        vals = w * (1 - u)
        ratio = vals.mean() / w.mean()
        stderr = vals.std() / math.sqrt(len(vals)) / w.mean()
        assert abs(ratio - 0.5) <= 3 * stderr

    def test_points_inside_ball(self, rng):
        z, w = sample_domain(3, 1, 2.0, rng, size=5_000)
        assert np.all(np.linalg.norm(z.reshape(len(z), -1), axis=1) < 1)

    def test_estimator_matches_closed_integral(self, rng):
        # int (1-|z|^2)^(s-2) dz = closed value at kappa = iota = 0
        s = 3.0
        z, w = sample_domain(1, 1, s - 2.0, rng, size=50_000)
        est = w.mean()  # the exponent is fully absorbed by the sampler
        assert math.isclose(est, float(closed_S(1, 1, 0, 0, 3)), rel_tol=1e-10)

    def test_rejection_path_volume(self, rng):
        # volume of the (2,2) ball against the exact closed form at s = p+q
        z, w = sample_domain(2, 2, 0.0, rng, size=200_000)
        vol = float(closed_S(2, 2, (0, 0), (0, 0), 4))
        stderr = w.std() / math.sqrt(len(w))
        assert abs(w.mean() - vol) <= 3 * stderr
        accepted = w > 0
        gram = np.eye(2)[None] - z[accepted] @ z[accepted].conj().transpose(0, 2, 1)
        assert np.linalg.eigvalsh(gram).min() > 0

    def test_nonintegrable_exponent_rejected(self, rng):
        with pytest.raises(ConvergenceError):
            sample_domain(1, 1, -1.0, rng)


class TestCpow:
    def test_sign_flip_bit_exact(self, rng):
        z = rng.standard_normal(100) + 1j * rng.standard_normal(100)
        for k in (1, 2, 3, -2, 5):
            a = cpow_int(z, k) * cpow_int(z, -k)
            b = cpow_int(-z, k) * cpow_int(-z, -k)
            assert np.array_equal(a, b)
