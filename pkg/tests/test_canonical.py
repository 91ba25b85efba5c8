import numpy as np
import pytest

from helpers import cplx, max_transfer_error, random_points, scramble
from schurloss.canonical import StableSystem, input_normal_form, lossless_completion, output_normal_form
from schurloss.errors import NotMinimal, NotOutputNormal, NotStable
from schurloss.matnum import ctranspose, haar_unitary, norm2, unitarity_residual
from schurloss.realization import Realization, gramians, is_lossless, random_stable
from schurloss.schur import default_chart, schur_decompose, schur_reconstruct


def output_normal_pair(rng, n, p):
    """Random (A, C) with A^* A + C^* C = I taken from a unitary column block."""
    q = haar_unitary(n + p, rng)[:, :n]
    return q[p:], q[:p]


def max_entry(g1, g2):
    return max(np.max(np.abs(getattr(g1, k) - getattr(g2, k)), initial=0.0) for k in "ABCD")


class TestStableSystem:
    def test_accepts_minimal(self):
        assert StableSystem(random_stable(3, 2, 2, seed=1)).n == 3

    def test_rejects_unstable(self):
        with pytest.raises(NotStable):
            StableSystem(Realization([[1.0]], [[1.0]], [[1.0]], [[0.0]]))

    def test_rejects_non_minimal(self):
        with pytest.raises(NotMinimal):
            StableSystem(Realization(np.diag([0.1, 0.5]), [[1.0], [0.0]], [[1.0, 1.0]], [[0.0]]))


class TestLosslessCompletion:
    def test_delay(self):
        b, d = lossless_completion([[0.0]], [[1.0]])
        assert abs(b[0, 0] - 1) < 1e-15 and abs(d[0, 0]) < 1e-15

    def test_random_certifies(self, rng):
        a, c = output_normal_pair(rng, 4, 2)
        b, d = lossless_completion(a, c)
        g = Realization(a, b, c, d)
        assert unitarity_residual(g.matrix) < 1e-12
        cert = is_lossless(g)
        assert cert.unitarity_residual < 1e-9 and cert.circle_residual < 1e-9
        assert norm2(g(1.0) - np.eye(2)) < 1e-12

    def test_unitary_state_change(self, rng):
        a, c = output_normal_pair(rng, 3, 2)
        q = haar_unitary(3, rng)
        b1, d1 = lossless_completion(a, c)
        b2, d2 = lossless_completion(ctranspose(q) @ a @ q, c @ q)
        assert norm2(d1 - d2) < 1e-12 and norm2(q @ b2 - b1) < 1e-12

    def test_not_output_normal(self, rng):
        with pytest.raises(NotOutputNormal):
            lossless_completion([[0.5]], [[1.0]])


class TestOutputNormalForm:
    def test_gramian_and_transfer(self, rng):
        for i in range(50):
            n, m, p = int(rng.integers(1, 7)), 1 + i % 2, 1 + (i // 2) % 3
            g = random_stable(n, m, p, seed=i)
            out, t = output_normal_form(StableSystem(g), default_chart(n, p))
            assert norm2(gramians(out).Wo - np.eye(n)) < 1e-8
            assert max_transfer_error(g, out, random_points(rng, 16)) < 1e-9
            assert norm2(t @ g.A @ np.linalg.inv(t) - out.A) < 1e-8

    def test_similarity_invariance(self, rng):
        g = random_stable(4, 2, 3, seed=7)
        chart = default_chart(4, 3)
        ref, _ = output_normal_form(g, chart)
        for _ in range(5):
            s, _ = scramble(g, rng)
            out, _ = output_normal_form(s, chart)
            assert max_entry(ref, out) < 1e-8

    def test_idempotent(self, rng):
        g = random_stable(3, 2, 2, seed=2)
        chart = default_chart(3, 2)
        out, _ = output_normal_form(g, chart)
        again, t = output_normal_form(out, chart)
        assert norm2(t - np.eye(3)) < 1e-9
        assert max_entry(out, again) < 1e-9

    def test_independent_of_b_and_d(self, rng):
        g = random_stable(3, 2, 2, seed=3)
        h = Realization(g.A, cplx(rng, 3, 2), g.C, cplx(rng, 2, 2))
        chart = default_chart(3, 2)
        o1, _ = output_normal_form(g, chart)
        o2, _ = output_normal_form(h, chart)
        assert np.array_equal(o1.A, o2.A) and np.array_equal(o1.C, o2.C)

    def test_pair_is_schur_balanced_completion(self, rng):
        g = random_stable(3, 1, 2, seed=4)
        chart = default_chart(3, 2)
        out, _ = output_normal_form(g, chart)
        # independent path: output-normalize by Cholesky, complete, then decompose and rebuild
        lh = ctranspose(np.linalg.cholesky(gramians(g).Wo))
        linv = np.linalg.inv(lh)
        a1, c1 = lh @ g.A @ linv, g.C @ linv
        b_t, d_t = lossless_completion(a1, c1)
        sb = schur_reconstruct(schur_decompose(Realization(a1, b_t, c1, d_t), chart))
        assert norm2(sb.A - out.A) < 1e-9 and norm2(sb.C - out.C) < 1e-9

    def test_degree_zero(self, rng):
        g = Realization.constant(cplx(rng, 2, 3))
        out, t = output_normal_form(g, default_chart(0, 2))
        assert out.n == 0 and t.shape == (0, 0)


class TestInputNormalForm:
    def test_gramian_and_transfer(self, rng):
        for i in range(50):
            n, m, p = int(rng.integers(1, 7)), 1 + i % 3, 1 + (i // 3) % 2
            g = random_stable(n, m, p, seed=100 + i)
            out, t = input_normal_form(StableSystem(g), default_chart(n, m))
            assert norm2(gramians(out).Wc - np.eye(n)) < 1e-8
            assert max_transfer_error(g, out, random_points(rng, 16)) < 1e-9
            assert norm2(t @ g.A @ np.linalg.inv(t) - out.A) < 1e-8

    def test_duality(self, rng):
        g = random_stable(3, 2, 3, seed=9)
        chart = default_chart(3, 2)
        inp, _ = input_normal_form(g, chart)
        outp, _ = output_normal_form(g.dual(), chart)
        assert max_entry(inp, outp.dual()) < 1e-12

    def test_similarity_invariance(self, rng):
        g = random_stable(4, 3, 2, seed=10)
        chart = default_chart(4, 3)
        ref, _ = input_normal_form(g, chart)
        for _ in range(5):
            s, _ = scramble(g, rng)
            out, _ = input_normal_form(s, chart)
            assert max_entry(ref, out) < 1e-8
