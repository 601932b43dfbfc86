import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from identent.decompositions import takagi, youla, youla_block_matrix
from identent.errors import CertificationError, ConsistencyError, ValidationError
from identent.linalg import frobenius_norm

from helpers import random_unitary, slater_state

R = 1 / math.sqrt(2)


def random_symmetric(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    b = g + g.T
    return b / np.linalg.norm(b)


def random_antisymmetric(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a = g - g.T
    return a / np.linalg.norm(a)


def svd_values(m):
    return np.linalg.svd(m, compute_uv=False)


class TestTakagi:
    def test_diagonal(self):
        r = takagi(np.diag([0.8, 0.6]))
        np.testing.assert_allclose(r.sigma, [0.8, 0.6], atol=1e-15)
        np.testing.assert_allclose(r.u, np.eye(2), atol=1e-15)

    def test_scaled_permutation(self):
        r = takagi([[0, R], [R, 0]])
        np.testing.assert_allclose(r.sigma, [R, R], atol=1e-15)
        assert r.residual <= 1e-15

    def test_negative_diagonal_gets_phase(self):
        r = takagi(np.diag([-0.6, 0.8j]))
        np.testing.assert_allclose(r.sigma, [0.8, 0.6], atol=1e-15)
        assert r.residual <= 1e-15

    def test_random_6x6(self, rng):
        b = random_symmetric(6, rng)
        r = takagi(b)
        assert frobenius_norm(b - (r.u * r.sigma) @ r.u.T) <= 1e-10
        np.testing.assert_allclose(r.sigma, svd_values(b), atol=1e-12)

    @pytest.mark.parametrize("n", range(1, 17))
    def test_random_sizes(self, n, rng):
        for _ in range(5):
            b = random_symmetric(n, rng)
            r = takagi(b)
            assert r.residual <= 1e-11
            assert r.unitarity_defect <= 1e-12
            assert np.all(np.diff(r.sigma) <= 0) and r.sigma[-1] >= 0
            assert abs(np.sum(r.sigma**2) - frobenius_norm(b) ** 2) <= 1e-10

    @pytest.mark.parametrize("pattern", [(2,), (3,), (2, 3), (4,), (2, 2, 2)])
    def test_engineered_degeneracy(self, pattern, rng):
        sigma = []
        for mult in pattern:
            sigma += [rng.random() + 0.1] * mult
        sigma += list(rng.random(3) + 0.1)
        n = len(sigma)
        u = random_unitary(n, rng)
        b = (u * sigma) @ u.T
        r = takagi(b)
        assert r.residual <= 1e-11
        np.testing.assert_allclose(r.sigma, np.sort(sigma)[::-1], atol=1e-12)

    @pytest.mark.parametrize("gap", [1e-3, 1e-6, 1e-8, 1e-10, 1e-14])
    def test_near_crossing(self, gap, rng):
        for _ in range(10):
            n = int(rng.integers(2, 12))
            sigma = rng.random(n) + 0.1
            sigma[1] = sigma[0] * (1 - gap)
            u = random_unitary(n, rng)
            r = takagi((u * sigma) @ u.T)
            assert r.residual <= 1e-11
            assert r.unitarity_defect <= 1e-12

    def test_rank_deficient(self, rng):
        sigma = np.array([0.9, 0.4, 1e-12, 0.0, 0.0])
        u = random_unitary(5, rng)
        r = takagi((u * sigma) @ u.T)
        assert r.residual <= 1e-12
        assert r.rank() == 2
        np.testing.assert_allclose(r.sigma, sigma, atol=1e-14)

    def test_zero(self):
        r = takagi(np.zeros((3, 3)))
        np.testing.assert_array_equal(r.sigma, 0.0)
        assert r.rank() == 0

    def test_congruence_invariance(self, rng):
        b = random_symmetric(7, rng)
        w = random_unitary(7, rng)
        np.testing.assert_allclose(takagi(w @ b @ w.T).sigma, takagi(b).sigma, atol=1e-9)

    def test_rejects_nonsymmetric(self, rng):
        with pytest.raises(ValidationError):
            takagi(random_antisymmetric(3, rng))

    def test_certification_failure(self, rng):
        with pytest.raises(CertificationError):
            takagi(random_symmetric(8, rng), fact_tol=1e-30)

    def test_deterministic(self, rng):
        b = random_symmetric(9, rng)
        a, c = takagi(b), takagi(b.copy())
        np.testing.assert_array_equal(a.u, c.u)
        np.testing.assert_array_equal(a.sigma, c.sigma)


class TestYoula:
    def test_canonical_2x2(self):
        r = youla([[0, R], [-R, 0]])
        np.testing.assert_allclose(r.z, [R], atol=1e-15)
        assert r.null_dim == 0
        np.testing.assert_allclose(r.u, np.eye(2), atol=1e-15)

    def test_canonical_with_zero_block(self):
        a = np.zeros((4, 4))
        a[0, 1], a[1, 0] = R, -R
        r = youla(a)
        np.testing.assert_allclose(r.z, [R], atol=1e-15)
        assert r.null_dim == 2
        np.testing.assert_allclose(r.u, np.eye(4), atol=1e-15)

    def test_block_matrix(self):
        z = youla_block_matrix([2.0, 1.0], 1)
        expected = np.zeros((5, 5))
        expected[0, 1], expected[1, 0] = 2, -2
        expected[2, 3], expected[3, 2] = 1, -1
        np.testing.assert_array_equal(z, expected)

    def test_random_6x6(self, rng):
        a = random_antisymmetric(6, rng)
        r = youla(a)
        assert frobenius_norm(a - r.reconstruct()) <= 1e-10
        np.testing.assert_allclose(np.repeat(r.z, 2), svd_values(a), atol=1e-12)

    @pytest.mark.parametrize("n", range(1, 17))
    def test_random_sizes(self, n, rng):
        for _ in range(5):
            a = random_antisymmetric(n, rng) if n > 1 else np.zeros((1, 1))
            r = youla(a)
            assert r.residual <= 1e-11
            assert r.unitarity_defect <= 1e-12
            assert 2 * r.z.size + r.null_dim == n
            assert r.null_dim == n % 2
            assert abs(2 * np.sum(r.z**2) - frobenius_norm(a) ** 2) <= 1e-10

    @pytest.mark.parametrize("pattern", [(2,), (3,), (2, 3), (4,)])
    def test_engineered_degeneracy(self, pattern, rng):
        z = []
        for mult in pattern:
            z += [rng.random() + 0.1] * mult
        z += list(rng.random(2) + 0.1)
        n = 2 * len(z) + 1
        a = slater_state(random_unitary(n, rng), z)
        r = youla(a)
        assert r.residual <= 1e-11
        assert r.null_dim == 1
        np.testing.assert_allclose(r.z, np.sort(z)[::-1] / math.sqrt(2), atol=1e-12)

    @pytest.mark.parametrize("gap", [1e-3, 1e-6, 1e-8, 1e-10, 1e-14])
    def test_near_crossing(self, gap, rng):
        for _ in range(10):
            k = int(rng.integers(2, 7))
            z = rng.random(k) + 0.1
            z[1] = z[0] * (1 - gap)
            n = 2 * k + int(rng.integers(0, 3))
            r = youla(slater_state(random_unitary(n, rng), z))
            assert r.residual <= 1e-11
            assert r.unitarity_defect <= 1e-12

    @pytest.mark.parametrize("tiny", [1e-7, 1e-8, 1e-10, 1e-13, 1e-15])
    def test_tiny_block_next_to_kernel(self, tiny, rng):
        z = [0.8, 0.5, 0.8 * tiny]
        u = random_unitary(9, rng)
        r = youla(slater_state(u, z))
        assert r.residual <= 1e-12
        assert 2 * r.z.size + r.null_dim == 9
        assert r.rank() == (3 if tiny > 1e-9 else 2)

    def test_odd_dimension_has_kernel(self, rng):
        a = random_antisymmetric(5, rng)
        r = youla(a)
        assert r.null_dim == 1
        assert np.linalg.norm(a @ np.conj(r.u[:, -1])) <= 1e-13

    def test_zero(self):
        r = youla(np.zeros((4, 4)))
        assert r.z.size == 0 and r.null_dim == 4

    def test_rejects_symmetric(self, rng):
        with pytest.raises(ValidationError):
            youla(random_symmetric(4, rng))

    def test_odd_multiplicity_is_inconsistent(self):
        # forbid any grouping so that the two halves of the pair are split
        with pytest.raises(ConsistencyError):
            youla([[0, 1], [-1, 0]], cluster_tol=-1.0, group_tol=-1.0)

    def test_certification_failure(self, rng):
        with pytest.raises(CertificationError):
            youla(random_antisymmetric(8, rng), fact_tol=1e-30)

    def test_congruence_invariance(self, rng):
        a = random_antisymmetric(8, rng)
        w = random_unitary(8, rng)
        np.testing.assert_allclose(youla(w @ a @ w.T).z, youla(a).z, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32 - 1), st.floats(-3, 3))
def test_factorizations_scale_with_input(n, seed, log_scale):
    rng = np.random.default_rng(seed)
    scale = 10.0**log_scale
    b = random_symmetric(n, rng) * scale
    a = random_antisymmetric(n, rng) * scale
    t, y = takagi(b), youla(a)
    assert t.residual <= 1e-11 * max(1.0, scale)
    assert y.residual <= 1e-11 * max(1.0, scale)
    np.testing.assert_allclose(t.sigma, svd_values(b), rtol=0, atol=1e-12 * scale)
    np.testing.assert_allclose(np.repeat(y.z, 2), svd_values(a)[:2 * y.z.size],
                               rtol=0, atol=1e-12 * scale)
