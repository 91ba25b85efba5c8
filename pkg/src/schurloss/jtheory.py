"""J-unitary constants and elementary J-inner factors, evaluated pointwise.

Conventions: ``J = diag(I_p, -I_p)`` and ``K = [[0, I_p], [I_p, 0]]``.
None of the degree-one factors here is given a state-space realization
(the factor with ``w = 0`` is not proper); they are only ever evaluated at
points, or used through their factorization into Halmos extensions and the
block-diagonal Blaschke-Potapov factor ``S_{u,w}``.
"""

import cmath
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DegenerateVector, NotContractive, NotJUnitary, PoleHit, SingularBlock, ValidationError
from .matnum import DEFAULT_TOL, as_cmatrix, as_cvector, ctranspose, hermitian_inv_sqrt, norm2

_UNIT_TOL = 1e-12


def signature(p):
    """J = diag(I_p, -I_p)."""
    return np.diag(np.r_[np.ones(p), -np.ones(p)]).astype(np.complex128)


def flip(p):
    """K = [[0, I_p], [I_p, 0]]."""
    k = np.zeros((2 * p, 2 * p), dtype=np.complex128)
    k[:p, p:] = np.eye(p)
    k[p:, :p] = np.eye(p)
    return k


def _is_inf(z):
    return z is None or cmath.isinf(complex(z))


def blaschke(w, z):
    """Blaschke factor ``b_w(z) = (z - w) / (1 - conj(w) z)`` for ``|w| != 1``.

    ``z = inf`` is accepted and gives ``-1/conj(w)``.
    """
    w = complex(w)
    if _is_inf(z):
        if w == 0:
            raise PoleHit("b_0 has its pole at infinity")
        return -1.0 / w.conjugate()
    z = complex(z)
    den = 1.0 - w.conjugate() * z
    if abs(den) <= 1e-14 * max(1.0, abs(z)):
        raise PoleHit(f"b_w has a pole at z = 1/conj(w) = {z}")
    return (z - w) / den


def caratheodory(w, z):
    """Caratheodory function ``c_w(z) = (z + w) / (z - w)`` for ``|w| = 1``."""
    w, z = complex(w), complex(z)
    if abs(z - w) <= 1e-14:
        raise PoleHit(f"c_w has a pole at z = w = {w}")
    return (z + w) / (z - w)


def junitary_residual(m):
    """``||M^* J M - J||_2``."""
    p = m.shape[0] // 2
    j = signature(p)
    return norm2(ctranspose(m) @ j @ m - j)


def halmos(e, tol=DEFAULT_TOL):
    """Halmos extension of a strictly contractive p x p matrix E.

    ``H(E) = [[(I-EE*)^{-1/2}, E (I-E*E)^{-1/2}], [E* (I-EE*)^{-1/2}, (I-E*E)^{-1/2}]]``
    is Hermitian, J-unitary, and ``H(E)^{-1} = H(-E)``.
    """
    e = as_cmatrix(e, "E")
    p = e.shape[0]
    if e.shape != (p, p):
        raise ValidationError(f"E must be square, got {e.shape}")
    if norm2(e) > 1.0 - tol.tol_contraction:
        raise NotContractive(f"||E|| = {norm2(e):.12g} is not < 1 - {tol.tol_contraction:g}")
    eye = np.eye(p)
    floor = tol.tol_contraction ** 2
    s1 = hermitian_inv_sqrt(eye - e @ ctranspose(e), floor)
    s2 = hermitian_inv_sqrt(eye - ctranspose(e) @ e, floor)
    return np.block([[s1, e @ s2], [ctranspose(e) @ s1, s2]])


def x_family(x, alpha, tol=DEFAULT_TOL):
    """``X_x(alpha) = I + (alpha - 1) x (x^* J x)^{-1} x^* J`` for ``x^* J x != 0``."""
    x = as_cvector(x, "x")
    p = x.size // 2
    jx = signature(p) @ x
    xjx = np.vdot(x, jx).real
    if abs(xjx) <= tol.tol_rank * np.vdot(x, x).real:
        raise DegenerateVector("X_x needs x^* J x != 0")
    return np.eye(2 * p) + (complex(alpha) - 1.0) * np.outer(x, np.conj(jx)) / xjx


def y_family(x, alpha, tol=DEFAULT_TOL):
    """``Y_x(alpha) = I + alpha x x^* J`` for a J-neutral vector (``x^* J x = 0``)."""
    x = as_cvector(x, "x")
    p = x.size // 2
    jx = signature(p) @ x
    if abs(np.vdot(x, jx).real) > tol.tol_rank * np.vdot(x, x).real:
        raise DegenerateVector("Y_x needs x^* J x = 0")
    return np.eye(2 * p) + complex(alpha) * np.outer(x, np.conj(jx))


def junitary_decompose(m, tol=DEFAULT_TOL):
    """Split a constant J-unitary M as ``H(E) diag(P, Q)``.

    Returns:
        (E, P, Q) with E strictly contractive and P, Q unitary.

    Raises:
        NotJUnitary: ``||M^* J M - J|| > tol_unitary``.
        SingularBlock: the lower-right block of M is singular.
    """
    m = as_cmatrix(m, "M")
    p = m.shape[0] // 2
    if m.shape != (2 * p, 2 * p):
        raise ValidationError(f"M must be 2p x 2p, got {m.shape}")
    if junitary_residual(m) > tol.tol_unitary:
        raise NotJUnitary(f"M is not J-unitary (residual {junitary_residual(m):.3e})")
    m11, m12, m22 = m[:p, :p], m[:p, p:], m[p:, p:]
    if np.linalg.svd(m22, compute_uv=False)[-1] <= tol.tol_rank:
        raise SingularBlock("lower-right block of M is singular")
    e = np.linalg.solve(m22.T, m12.T).T
    # M11 = (I-EE*)^{-1/2} P and M22 = (I-E*E)^{-1/2} Q are left polar decompositions
    pu, _ = scipy.linalg.polar(m11, side="left")
    qu, _ = scipy.linalg.polar(m22, side="left")
    return e, pu, qu


@dataclass(frozen=True, eq=False)
class ElementaryFactor:
    """Parameters (u, v, w, xi, H) of a degree-one J-inner factor analytic in the disk.

    The factor has its pole at ``1/conj(w)`` and satisfies ``Theta(xi) = H``.
    """

    u: np.ndarray
    v: np.ndarray
    w: complex
    xi: complex = 1.0
    H: np.ndarray = None

    def __post_init__(self):
        u = as_cvector(self.u, "u")
        p = u.size
        v = as_cvector(self.v, "v", size=p)
        w, xi = complex(self.w), complex(self.xi)
        h = np.eye(2 * p, dtype=np.complex128) if self.H is None else as_cmatrix(self.H, "H", shape=(2 * p, 2 * p))
        tol = DEFAULT_TOL
        if abs(np.linalg.norm(u) - 1.0) > _UNIT_TOL:
            raise ValidationError(f"||u|| = {np.linalg.norm(u)!r}, expected 1")
        if np.linalg.norm(v) > 1.0 - tol.tol_contraction:
            raise NotContractive(f"||v|| = {np.linalg.norm(v)!r} is not < 1")
        if abs(w) > 1.0 - tol.tol_contraction:
            raise NotContractive(f"|w| = {abs(w)!r} is not < 1")
        if abs(abs(xi) - 1.0) > _UNIT_TOL:
            raise ValidationError(f"|xi| = {abs(xi)!r}, expected 1")
        if junitary_residual(h) > tol.tol_unitary:
            raise NotJUnitary("H is not J-unitary")
        for name, val in (("u", u), ("v", v), ("w", w), ("xi", xi), ("H", h)):
            if isinstance(val, np.ndarray):
                val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def p(self):
        return self.u.size


def theta_eval(f, z):
    """Evaluate the elementary J-inner factor ``Theta(u, v, w, xi, H)`` at z.

    ``Theta(z) = (I + (b_w(z)/b_w(xi) - 1) x x^* J / (1 - ||v||^2)) H``
    with ``x = [u; v]``.
    """
    p = f.p
    x = np.r_[f.u, f.v]
    ratio = blaschke(f.w, z) / blaschke(f.w, f.xi)
    core = np.eye(2 * p) + (ratio - 1.0) * np.outer(x, np.conj(signature(p) @ x)) / (1.0 - np.vdot(f.v, f.v).real)
    return core @ f.H


def s_factor(u, w, z):
    """``S_{u,w}(z) = diag(I - (1 - b_w(z)) u u^*, I)``."""
    u = as_cvector(u, "u")
    p = u.size
    s = np.eye(2 * p, dtype=np.complex128)
    s[:p, :p] -= (1.0 - blaschke(w, z)) * np.outer(u, np.conj(u))
    return s


def theta_hat_eval(u, v, w, z, tol=DEFAULT_TOL):
    """``Theta_hat(u, v, w)(z) = H(u v^*) S_{u,w}(z) H(conj(w) u v^*)``."""
    u = as_cvector(u, "u")
    v = as_cvector(v, "v", size=u.size)
    uv = np.outer(u, np.conj(v))
    return halmos(uv, tol) @ s_factor(u, w, z) @ halmos(np.conj(w) * uv, tol)


def theta_hat_factor(u, v, w, xi=1.0, tol=DEFAULT_TOL):
    """The (xi, H) choice for which ``Theta(u, v, w, xi, H) = Theta_hat(u, v, w)``.

    ``H = H(u v^*) S_{u,w}(xi) H(conj(w) u v^*)``.
    """
    return ElementaryFactor(u, v, w, xi, theta_hat_eval(u, v, w, xi, tol))


def theta_dual(f, z):
    """``Theta°(z) = K Theta(1/z) K``, a J-inner factor analytic outside the disk."""
    if _is_inf(z):
        zi = 0.0
    elif complex(z) == 0:
        zi = np.inf
    else:
        zi = 1.0 / complex(z)
    k = flip(f.p)
    return k @ theta_eval(f, zi) @ k


def jinner_residuals(fn, p, n_circle=64, n_interior=32, seed=0):
    """Sample-based J-inner check of the matrix function ``fn``.

    Returns:
        (circle, interior): ``max ||Theta^* J Theta - J||`` on the unit circle,
        and the largest eigenvalue of ``Theta^* J Theta - J`` over random
        points of the open disk (non-positive for a J-inner function).
    """
    j = signature(p)
    circle = 0.0
    for z in np.exp(2j * np.pi * (np.arange(n_circle) + 0.5) / n_circle):
        t = fn(z)
        circle = max(circle, norm2(ctranspose(t) @ j @ t - j))
    rng = np.random.default_rng(seed)
    interior = -np.inf
    for _ in range(n_interior):
        z = 0.98 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        t = fn(z)
        interior = max(interior, float(np.linalg.eigvalsh(ctranspose(t) @ j @ t - j)[-1]))
    return circle, interior
