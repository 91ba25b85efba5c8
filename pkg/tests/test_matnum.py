import numpy as np
import pytest
import scipy.linalg

from helpers import cplx, series_gramian
from schurloss.errors import NotHermitian, NotIsometry, NotStable, ValidationError
from schurloss.matnum import (
    DEFAULT_TOL,
    ToleranceProfile,
    ctranspose,
    gramian_factor,
    haar_unitary,
    solve_stein,
    solve_stein_sylvester,
    stein_residual,
    unitarity_residual,
    unitary_completion,
)


def stable(rng, n, radius=0.9):
    a = cplx(rng, n, n)
    return radius * a / np.max(np.abs(np.linalg.eigvals(a)))


class TestToleranceProfile:
    def test_defaults(self):
        t = ToleranceProfile()
        assert (t.tol_unitary, t.tol_rank, t.tol_contraction, t.tol_roundtrip) == (1e-8, 1e-9, 1e-10, 1e-7)

    @pytest.mark.parametrize("bad", [0.0, -1e-3, np.nan, np.inf])
    def test_rejects_non_positive(self, bad):
        with pytest.raises(ValidationError):
            ToleranceProfile(tol_rank=bad)


class TestSolveStein:
    def test_zero_a_returns_q(self, rng):
        b = cplx(rng, 3, 2)
        q = b @ ctranspose(b)
        np.testing.assert_allclose(solve_stein(np.zeros((3, 3)), q), q, atol=1e-15)

    def test_scalar(self):
        w = solve_stein(np.array([[0.5]]), np.array([[1.0]]))
        assert abs(w[0, 0] - 4.0 / 3.0) < 1e-15

    def test_random_residual(self, rng):
        a = stable(rng, 5)
        b = cplx(rng, 5, 2)
        q = b @ ctranspose(b)
        w = solve_stein(a, q)
        assert stein_residual(a, w, q) < 1e-10
        assert stein_residual(a, w, q) <= DEFAULT_TOL.tol_rank * (1 + np.linalg.norm(q))

    @pytest.mark.parametrize("n", range(1, 9))
    def test_series_oracle_and_psd(self, rng, n):
        a = stable(rng, n, 0.85)
        b = cplx(rng, n, 2)
        q = b @ ctranspose(b)
        w = solve_stein(a, q)
        assert np.linalg.norm(w - series_gramian(a, q), 2) < 1e-9
        assert np.linalg.norm(w - ctranspose(w)) < 1e-10
        assert np.linalg.eigvalsh(w)[0] >= -1e-10
        # scipy's solver as a second oracle
        ref = scipy.linalg.solve_discrete_lyapunov(a, q)
        assert np.linalg.norm(w - ref, 2) < 1e-9 * max(1.0, np.linalg.norm(ref, 2))

    def test_doubling_path_large_n(self, rng):
        a = stable(rng, 40, 0.8)
        b = cplx(rng, 40, 3)
        q = b @ ctranspose(b)
        w = solve_stein(a, q)
        assert stein_residual(a, w, q) < 1e-9 * (1 + np.linalg.norm(q))

    def test_sylvester_variant(self, rng):
        a, b = stable(rng, 3), stable(rng, 4)
        q = cplx(rng, 3, 4)
        x = solve_stein_sylvester(a, b, q)
        assert np.linalg.norm(x - a @ x @ b - q) < 1e-12

    def test_not_stable(self):
        with pytest.raises(NotStable):
            solve_stein(np.array([[1.0]]), np.array([[1.0]]))

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            solve_stein(np.zeros((2, 2)), np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_empty(self):
        assert solve_stein(np.zeros((0, 0)), np.zeros((0, 0))).shape == (0, 0)


class TestGramianFactor:
    def test_matches_gramian(self, rng):
        a = stable(rng, 6)
        b = cplx(rng, 6, 2)
        lf = gramian_factor(a, b)
        w = solve_stein(a, b @ ctranspose(b))
        assert np.linalg.norm(lf @ ctranspose(lf) - w, 2) < 1e-10 * np.linalg.norm(w, 2)


class TestUnitaryCompletion:
    def test_identity_columns(self):
        m = np.eye(5)[:, :3]
        np.testing.assert_allclose(unitary_completion(m), np.eye(5)[:, 3:], atol=1e-15)

    def test_two_by_one(self):
        m = np.array([[1.0], [1.0]]) / np.sqrt(2)
        n = unitary_completion(m)
        full = np.hstack([m, n])
        assert np.linalg.norm(ctranspose(full) @ full - np.eye(2)) < 1e-12

    def test_random_isometry(self, rng):
        m = haar_unitary(6, rng)[:, :4]
        n = unitary_completion(m)
        assert n.shape == (6, 2)
        assert unitarity_residual(np.hstack([m, n])) < 1e-10

    def test_phase_convention_and_determinism(self, rng):
        m = haar_unitary(7, rng)[:, :3]
        n1, n2 = unitary_completion(m), unitary_completion(m.copy())
        assert np.array_equal(n1, n2)
        for col in n1.T:
            big = col[np.argmax(np.abs(col))]
            assert abs(big.imag) < 1e-15 and big.real > 0

    def test_not_isometry(self):
        with pytest.raises(NotIsometry):
            unitary_completion(np.array([[1.0], [1.0]]))

    def test_square_input(self, rng):
        assert unitary_completion(haar_unitary(3, rng)).shape == (3, 0)
