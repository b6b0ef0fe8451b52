"""Factorization and solve contracts, checked against hand examples and
an independent numpy.linalg oracle."""

import numpy as np
import pytest

from isqp import linalg
from isqp.errors import NotPositiveDefiniteError, SingularMatrixError


class TestLuSolve:
    def test_identity(self):
        b = np.array([1.0, 2.0, 3.0])
        assert np.array_equal(linalg.lu_solve(np.eye(3), b), b)

    def test_two_by_two_hand_example(self):
        # x + y = 0 and x - 2y = -3 meet at (-1, 1).
        a = np.array([[1.0, 1.0], [1.0, -2.0]])
        x = linalg.lu_solve(a, np.array([0.0, -3.0]))
        assert np.allclose(x, [-1.0, 1.0], atol=1e-14)

    def test_requires_pivoting(self):
        a = np.array([[0.0, 1.0], [1.0, 0.0]])
        x = linalg.lu_solve(a, np.array([5.0, 7.0]))
        assert np.allclose(x, [7.0, 5.0], atol=1e-14)

    def test_random_well_conditioned_multiply_back(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            a = rng.normal(size=(8, 8)) + 8.0 * np.eye(8)
            b = rng.normal(size=8)
            x = linalg.lu_solve(a, b)
            residual = np.max(np.abs(a @ x - b))
            assert residual <= 1e-10 * max(1.0, np.max(np.abs(b)))

    def test_matches_numpy_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            n = int(rng.integers(1, 9))
            a = rng.normal(size=(n, n)) + 3.0 * np.eye(n)
            b = rng.normal(size=n)
            assert np.allclose(linalg.lu_solve(a, b), np.linalg.solve(a, b),
                               atol=1e-9, rtol=1e-9)

    def test_multiple_right_hand_sides(self):
        rng = np.random.default_rng(3)
        a = rng.normal(size=(5, 5)) + 4.0 * np.eye(5)
        b = rng.normal(size=(5, 3))
        x = linalg.lu_factor(a).solve(b)
        assert x.shape == (5, 3)
        assert np.allclose(a @ x, b, atol=1e-10)

    def test_singular_matrix_raises(self):
        a = np.array([[1.0, 2.0], [2.0, 4.0]])
        with pytest.raises(SingularMatrixError):
            linalg.lu_solve(a, np.array([1.0, 1.0]))

    def test_zero_matrix_raises(self):
        with pytest.raises(SingularMatrixError):
            linalg.lu_solve(np.zeros((2, 2)), np.array([1.0, 1.0]))

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            linalg.lu_solve(np.ones((2, 3)), np.ones(2))

    def test_wrong_rhs_length_rejected(self):
        fac = linalg.lu_factor(np.eye(3))
        with pytest.raises(ValueError):
            fac.solve(np.ones(4))


class TestCholesky:
    def test_identity(self):
        assert np.array_equal(linalg.cholesky(np.eye(2)), np.eye(2))

    def test_two_by_two_hand_example(self):
        a = np.array([[4.0, 2.0], [2.0, 5.0]])
        low = linalg.cholesky(a)
        assert np.allclose(low, [[2.0, 0.0], [1.0, 2.0]], atol=1e-14)

    def test_factor_multiplies_back(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = int(rng.integers(1, 7))
            g = rng.normal(size=(n, n))
            a = g @ g.T + np.eye(n)
            low = linalg.cholesky(a)
            assert np.allclose(np.tril(low), low)
            assert np.allclose(low @ low.T, a, atol=1e-10 * np.max(np.abs(a)))

    def test_indefinite_raises(self):
        # Eigenvalues are 3 and -1.
        with pytest.raises(NotPositiveDefiniteError):
            linalg.cholesky(np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError):
            linalg.cholesky(np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_succeeds_iff_eigenvalues_positive(self):
        # Oracle: factorization success must agree with the spectrum for
        # matrices whose eigenvalues are bounded away from zero.
        rng = np.random.default_rng(19)
        for _ in range(200):
            n = int(rng.integers(1, 7))
            g = rng.normal(size=(n, n))
            sym = (g + g.T) / 2.0
            eigs = np.linalg.eigvalsh(sym)
            if np.min(np.abs(eigs)) < 1e-6 * max(1.0, np.max(np.abs(eigs))):
                continue  # too close to the floor for a crisp verdict
            if np.min(eigs) > 0:
                linalg.cholesky(sym)
            else:
                with pytest.raises(NotPositiveDefiniteError):
                    linalg.cholesky(sym)


class TestSpdSolve:
    def test_scaled_identity(self):
        x = linalg.spd_solve(2.0 * np.eye(2), np.array([2.0, 4.0]))
        assert np.allclose(x, [1.0, 2.0], atol=1e-14)

    def test_one_by_one(self):
        # Gram matrix of a single unit column plus no damping.
        n_col = np.array([[1.0], [0.0]])
        m = n_col.T @ n_col
        assert np.allclose(linalg.spd_solve(m, np.array([3.0])), [3.0])

    def test_random_spd_multiply_back(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            n = int(rng.integers(1, 7))
            g = rng.normal(size=(n, n))
            m = g @ g.T + np.eye(n)
            b = rng.normal(size=n)
            x = linalg.spd_solve(m, b)
            assert np.max(np.abs(m @ x - b)) <= 1e-10 * max(1.0, np.max(np.abs(b)))

    def test_matches_numpy_oracle_multi_rhs(self):
        rng = np.random.default_rng(29)
        g = rng.normal(size=(6, 6))
        m = g @ g.T + np.eye(6)
        b = rng.normal(size=(6, 4))
        assert np.allclose(linalg.spd_solve(m, b), np.linalg.solve(m, b),
                           atol=1e-9)

    def test_indefinite_propagates(self):
        with pytest.raises(NotPositiveDefiniteError):
            linalg.spd_solve(np.array([[1.0, 2.0], [2.0, 1.0]]), np.ones(2))
