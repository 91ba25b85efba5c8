import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import cplx, random_contraction
from schurloss.errors import DegenerateVector, NotContractive, NotJUnitary, PoleHit, SingularBlock, ValidationError
from schurloss.jtheory import (
    ElementaryFactor,
    blaschke,
    caratheodory,
    flip,
    halmos,
    jinner_residuals,
    junitary_decompose,
    junitary_residual,
    s_factor,
    signature,
    theta_dual,
    theta_eval,
    theta_hat_eval,
    theta_hat_factor,
    x_family,
    y_family,
)
from schurloss.matnum import ToleranceProfile, ctranspose, haar_unitary, norm2, random_disk_point, random_unit_vector
from schurloss.realization import circle_points


def random_factor(rng, p, with_h=True):
    u = random_unit_vector(p, rng)
    v = 0.7 * rng.uniform() * random_unit_vector(p, rng)
    w = random_disk_point(rng, 0.8)
    xi = np.exp(2j * np.pi * rng.uniform())
    h = None
    if with_h:
        z = np.zeros((p, p))
        h = halmos(random_contraction(rng, p, 0.6)) @ np.block([[haar_unitary(p, rng), z], [z, haar_unitary(p, rng)]])
    return ElementaryFactor(u, v, w, xi, h)


def neutral_vector(rng, p):
    a, b = random_unit_vector(p, rng), random_unit_vector(p, rng)
    return np.r_[a, b] * (1 + rng.uniform())


class TestSignature:
    def test_j_and_k(self):
        j, k = signature(3), flip(3)
        assert np.allclose(j, ctranspose(j)) and np.allclose(j @ j, np.eye(6))
        assert np.allclose(k @ j, -j @ k)


class TestBlaschke:
    def test_b0_is_identity_map(self):
        assert blaschke(0, 0.3 + 0.2j) == 0.3 + 0.2j

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0, 0.95), st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi))
    def test_circle_to_circle(self, r, phi, theta):
        w = r * np.exp(1j * phi)
        assert abs(abs(blaschke(w, np.exp(1j * theta))) - 1) < 1e-12

    def test_zero_and_pole(self):
        w = 0.3 - 0.4j
        assert blaschke(w, w) == 0
        with pytest.raises(PoleHit):
            blaschke(w, 1 / np.conj(w))

    def test_infinity(self):
        w = 0.5j
        assert abs(blaschke(w, np.inf) - (-1 / np.conj(w))) < 1e-15
        with pytest.raises(PoleHit):
            blaschke(0, np.inf)

    def test_caratheodory(self):
        w = np.exp(0.3j)
        z = 0.2 + 0.1j
        assert abs(caratheodory(w, z) - (z + w) / (z - w)) < 1e-15
        with pytest.raises(PoleHit):
            caratheodory(w, w)


class TestHalmos:
    def test_zero(self):
        assert np.array_equal(halmos(np.zeros((2, 2))), np.eye(4))

    def test_properties(self, rng):
        for p in (1, 2, 3):
            e = random_contraction(rng, p, 0.7)
            h = halmos(e)
            assert norm2(h - ctranspose(h)) < 1e-12
            assert junitary_residual(h) < 1e-10
            assert norm2(h @ halmos(-e) - np.eye(2 * p)) < 1e-10
            k = flip(p)
            assert norm2(k @ h @ k - halmos(ctranspose(e))) < 1e-12

    def test_not_contractive(self):
        with pytest.raises(NotContractive):
            halmos(np.array([[1.0]]))


class TestXYFamilies:
    def test_identity_values(self, rng):
        x = cplx(rng, 4)
        assert np.allclose(x_family(x, 1.0), np.eye(4))
        assert np.allclose(y_family(neutral_vector(rng, 2), 0.0), np.eye(4))

    def test_x_group_law_and_det(self, rng):
        x = cplx(rng, 6)
        for _ in range(20):
            a, b = cplx(rng), cplx(rng)
            assert norm2(x_family(x, a) @ x_family(x, b) - x_family(x, a * b)) < 1e-10
            assert abs(np.linalg.det(x_family(x, a)) - a) < 1e-10 * max(1, abs(a))

    def test_y_group_law(self, rng):
        x = neutral_vector(rng, 3)
        for _ in range(20):
            a, b = cplx(rng), cplx(rng)
            assert norm2(y_family(x, a) @ y_family(x, b) - y_family(x, a + b)) < 1e-10

    def test_j_unitarity_loci(self, rng):
        x = cplx(rng, 4)
        assert junitary_residual(x_family(x, np.exp(0.7j))) < 1e-10
        assert junitary_residual(x_family(x, 0.5)) > 1e-3
        y = neutral_vector(rng, 2)
        assert junitary_residual(y_family(y, 0.8j)) < 1e-10
        assert junitary_residual(y_family(y, 0.8)) > 1e-3

    def test_defect_identities(self, rng):
        p = 2
        j = signature(p)
        x = cplx(rng, 2 * p)
        xjx = np.vdot(x, j @ x).real
        y = neutral_vector(rng, p)
        for _ in range(20):
            a, b = cplx(rng), cplx(rng)
            lhs = j - x_family(x, a) @ j @ ctranspose(x_family(x, b))
            rhs = (1 - a * np.conj(b)) / xjx * np.outer(x, np.conj(x))
            assert norm2(lhs - rhs) < 1e-9 * max(1, abs(a), abs(b)) ** 2
            # the rank-one defect of Y carries a minus sign: Y(a) J Y(b)^* = J + (a + conj(b)) y y^*
            lhs = j - y_family(y, a) @ j @ ctranspose(y_family(y, b))
            assert norm2(lhs + (a + np.conj(b)) * np.outer(y, np.conj(y))) < 1e-9 * max(1, abs(a), abs(b)) ** 2

    def test_degenerate(self, rng):
        with pytest.raises(DegenerateVector):
            x_family(neutral_vector(rng, 2), 2.0)
        with pytest.raises(DegenerateVector):
            y_family(np.array([1.0, 0.0]), 1j)


class TestJUnitaryDecompose:
    def test_roundtrip(self, rng):
        p = 3
        e0 = random_contraction(rng, p, 0.6)
        p0, q0 = haar_unitary(p, rng), haar_unitary(p, rng)
        m = halmos(e0) @ np.block([[p0, np.zeros((p, p))], [np.zeros((p, p)), q0]])
        e, pu, qu = junitary_decompose(m)
        assert norm2(e - e0) < 1e-9 and norm2(pu - p0) < 1e-9 and norm2(qu - q0) < 1e-9
        assert norm2(halmos(e) @ np.block([[pu, np.zeros((p, p))], [np.zeros((p, p)), qu]]) - m) < 1e-9

    def test_identity(self):
        e, pu, qu = junitary_decompose(np.eye(4))
        assert np.allclose(e, 0) and np.allclose(pu, np.eye(2)) and np.allclose(qu, np.eye(2))

    def test_block_diagonal(self, rng):
        p0, q0 = haar_unitary(2, rng), haar_unitary(2, rng)
        m = np.block([[p0, np.zeros((2, 2))], [np.zeros((2, 2)), q0]])
        e, _, _ = junitary_decompose(m)
        assert norm2(e) < 1e-14

    def test_errors(self):
        with pytest.raises(NotJUnitary):
            junitary_decompose(2 * np.eye(2))
        with pytest.raises(SingularBlock):
            junitary_decompose(np.diag([1.0, 0.0]), tol=ToleranceProfile(tol_unitary=10.0))


class TestElementaryFactor:
    def test_validation(self, rng):
        u = random_unit_vector(2, rng)
        with pytest.raises(ValidationError):
            ElementaryFactor(2 * u, np.zeros(2), 0.1)
        with pytest.raises(NotContractive):
            ElementaryFactor(u, np.array([1.0, 0.0]), 0.1)
        with pytest.raises(NotContractive):
            ElementaryFactor(u, np.zeros(2), 1.0)
        with pytest.raises(ValidationError):
            ElementaryFactor(u, np.zeros(2), 0.1, xi=0.9)
        with pytest.raises(NotJUnitary):
            ElementaryFactor(u, np.zeros(2), 0.1, H=2 * np.eye(4))


class TestThetaEval:
    def test_value_at_xi(self, rng):
        f = random_factor(rng, 2)
        assert norm2(theta_eval(f, f.xi) - f.H) < 1e-12

    def test_kernel_condition(self, rng):
        for p in (1, 2, 3):
            f = random_factor(rng, p)
            row = np.conj(np.r_[f.u, -f.v])
            assert np.linalg.norm(row @ theta_eval(f, f.w)) < 1e-10

    def test_j_inner(self, rng):
        f = random_factor(rng, 2)
        circle, interior = jinner_residuals(lambda z: theta_eval(f, z), 2)
        assert circle < 1e-9 and interior <= 1e-9

    def test_factorization(self, rng):
        for p in (1, 2, 3):
            f = random_factor(rng, p)
            e = np.outer(f.u, np.conj(f.v))
            s_xi_inv = np.linalg.inv(s_factor(f.u, f.w, f.xi))
            for z in 1.5 * rng.uniform(size=4) * np.exp(2j * np.pi * rng.uniform(size=4)):
                rhs = halmos(e) @ s_factor(f.u, f.w, z) @ s_xi_inv @ halmos(-e) @ f.H
                assert norm2(theta_eval(f, z) - rhs) < 1e-9

    def test_inverse_identity(self, rng):
        f = random_factor(rng, 2)
        j = signature(2)
        for z in rng.uniform(0.3, 0.9, 5) * np.exp(2j * np.pi * rng.uniform(size=5)):
            sharp = ctranspose(theta_eval(f, 1 / np.conj(z)))
            assert norm2(np.linalg.inv(theta_eval(f, z)) - j @ sharp @ j) < 1e-9

    def test_pole(self, rng):
        f = random_factor(rng, 1)
        with pytest.raises(PoleHit):
            theta_eval(f, 1 / np.conj(f.w))


class TestSFactor:
    def test_unit_blaschke_value(self, rng):
        u = random_unit_vector(2, rng)
        w = 0.3 + 0.1j
        # b_w(z) = 1 at z = (1 + w) / (1 + conj(w))
        z = (1 + w) / (1 + np.conj(w))
        assert norm2(s_factor(u, w, z) - np.eye(4)) < 1e-14

    def test_det(self, rng):
        u = random_unit_vector(3, rng)
        w = random_disk_point(rng, 0.8)
        for z in rng.uniform(0, 2, 5) * np.exp(2j * np.pi * rng.uniform(size=5)):
            assert abs(np.linalg.det(s_factor(u, w, z)) - blaschke(w, z)) < 1e-12

    def test_block_unitary_on_circle(self, rng):
        u = random_unit_vector(2, rng)
        w = random_disk_point(rng, 0.8)
        for z in circle_points(8):
            blk = s_factor(u, w, z)[:2, :2]
            assert norm2(ctranspose(blk) @ blk - np.eye(2)) < 1e-12


class TestThetaHat:
    def test_trivial(self, rng):
        u = random_unit_vector(2, rng)
        z = 0.4 - 0.3j
        expected = np.eye(4, dtype=complex)
        expected[:2, :2] -= (1 - z) * np.outer(u, np.conj(u))
        assert norm2(theta_hat_eval(u, np.zeros(2), 0, z) - expected) < 1e-14

    def test_kernel_and_j_unitarity(self, rng):
        u = random_unit_vector(3, rng)
        v = 0.6 * random_unit_vector(3, rng)
        w = random_disk_point(rng, 0.8)
        assert np.linalg.norm(np.conj(np.r_[u, -v]) @ theta_hat_eval(u, v, w, w)) < 1e-10
        for z in circle_points(8):
            assert junitary_residual(theta_hat_eval(u, v, w, z)) < 1e-10

    def test_matches_general_theta(self, rng):
        u = random_unit_vector(2, rng)
        v = 0.5 * random_unit_vector(2, rng)
        w = random_disk_point(rng, 0.8)
        f = theta_hat_factor(u, v, w, xi=np.exp(0.4j))
        for z in 1.5 * rng.uniform(size=6) * np.exp(2j * np.pi * rng.uniform(size=6)):
            assert norm2(theta_eval(f, z) - theta_hat_eval(u, v, w, z)) < 1e-10


class TestThetaDual:
    def test_involution(self, rng):
        f = random_factor(rng, 2)
        k = flip(2)
        for z in rng.uniform(0.2, 2, 4) * np.exp(2j * np.pi * rng.uniform(size=4)):
            # dual of the dual, evaluated via the definition twice
            twice = k @ theta_dual(f, 1 / z) @ k
            assert norm2(twice - theta_eval(f, z)) < 1e-12

    def test_j_inner_on_circle(self, rng):
        f = random_factor(rng, 2)
        circle = max(junitary_residual(theta_dual(f, z)) for z in circle_points(64))
        assert circle < 1e-9

    def test_w0_analytic_outside(self, rng):
        u = random_unit_vector(2, rng)
        f = ElementaryFactor(u, 0.3 * random_unit_vector(2, rng), 0.0)
        for z in (2.0, 10.0, 100.0):
            assert np.all(np.isfinite(theta_dual(f, z)))
