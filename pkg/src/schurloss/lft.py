"""Linear fractional transformations acting on lossless realizations.

``T_Theta(G) = (Theta_4 G + Theta_3)(Theta_2 G + Theta_1)^{-1}`` for a 2p x 2p
matrix (function) ``Theta = [[Theta_1, Theta_2], [Theta_3, Theta_4]]``.

The elementary Schur step is realized through the pair recursion
``F_{U,V}``: given unitary ``(p+1) x (p+1)`` matrices U and V and a
realization matrix R of G, the realization matrix of ``F_{U,V}(G)`` is
``diag(V, I_n) diag(1, R) diag(U^*, I_n)`` repartitioned with one more state.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DeflationFailed,
    DegeneratePair,
    DimensionMismatch,
    NotJUnitary,
    NotLossless,
    PoleHit,
    SchurVectorTooLarge,
    SingularPivot,
    ValidationError,
)
from .jtheory import blaschke, halmos, junitary_residual
from .matnum import (
    DEFAULT_TOL,
    as_cmatrix,
    as_cvector,
    ctranspose,
    norm2,
    unitarity_residual,
    unitary_completion,
)
from .realization import Realization, balance_lossless, evaluate


@dataclass(frozen=True, eq=False)
class UnitaryPair:
    """Two unitary (p+1) x (p+1) matrices partitioned as ``[[alpha, M], [k, beta^*]]``."""

    U: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        u = as_cmatrix(self.U, "U")
        q = u.shape[0]
        if u.shape != (q, q) or q < 2:
            raise DimensionMismatch(f"U must be (p+1) x (p+1) with p >= 1, got {u.shape}")
        v = as_cmatrix(self.V, "V", shape=(q, q))
        for name, arr in (("U", u), ("V", v)):
            if unitarity_residual(arr) > DEFAULT_TOL.tol_unitary:
                raise ValidationError(f"{name} is not unitary (residual {unitarity_residual(arr):.3e})")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def p(self):
        return self.U.shape[0] - 1

    @property
    def alpha_U(self):
        return self.U[:-1, 0]

    @property
    def M_U(self):
        return self.U[:-1, 1:]

    @property
    def k_U(self):
        return complex(self.U[-1, 0])

    @property
    def beta_U(self):
        return np.conj(self.U[-1, 1:])

    @property
    def alpha_V(self):
        return self.V[:-1, 0]

    @property
    def M_V(self):
        return self.V[:-1, 1:]

    @property
    def k_V(self):
        return complex(self.V[-1, 0])

    @property
    def beta_V(self):
        return np.conj(self.V[-1, 1:])


def lft_pointwise(theta, g):
    """``T_Theta(G) = (Theta_4 G + Theta_3)(Theta_2 G + Theta_1)^{-1}`` for constant matrices."""
    p = g.shape[1]
    t1, t2, t3, t4 = theta[:p, :p], theta[:p, p:], theta[p:, :p], theta[p:, p:]
    num = t4 @ g + t3
    den = t2 @ g + t1
    return np.linalg.solve(den.T, num.T).T


def mobius(m, g, tol=DEFAULT_TOL):
    """Realization of ``T_M(G)`` for a constant J-unitary M; the state dimension is kept.

    A balanced input gives a balanced output.

    Raises:
        NotJUnitary: M fails the J-unitarity check.
        SingularPivot: ``M_2 D + M_1`` is singular within ``tol_rank``.
    """
    p = g.p
    m = as_cmatrix(m, "M", shape=(2 * p, 2 * p))
    if g.m != p:
        raise DimensionMismatch("mobius needs a square transfer matrix")
    if junitary_residual(m) > tol.tol_unitary:
        raise NotJUnitary(f"M is not J-unitary (residual {junitary_residual(m):.3e})")
    m1, m2, m3, m4 = m[:p, :p], m[:p, p:], m[p:, :p], m[p:, p:]
    pivot = m2 @ g.D + m1
    if np.linalg.svd(pivot, compute_uv=False)[-1] <= tol.tol_rank:
        raise SingularPivot("M_2 D + M_1 is singular")
    pinv = np.linalg.inv(pivot)
    top = (m4 @ g.D + m3) @ pinv
    a = g.A - g.B @ pinv @ m2 @ g.C
    b = g.B @ pinv
    c = (m4 - top @ m2) @ g.C
    return Realization(a, b, c, top)


def fuv_apply(pair, g):
    """Realization of ``F_{U,V}(G)`` with state dimension n + 1.

    Unitary U, V and a unitary realization matrix of G give a unitary
    realization matrix of the result.
    """
    p, n = pair.p, g.n
    if g.p != p or g.m != p:
        raise DimensionMismatch(f"pair is for p={p}, G is {g.p} x {g.m}")
    q = p + 1
    mid = np.zeros((q + n, q + n), dtype=np.complex128)
    mid[0, 0] = 1.0
    mid[1:, 1:] = g.matrix
    left = np.eye(q + n, dtype=np.complex128)
    left[:q, :q] = pair.V
    right = np.eye(q + n, dtype=np.complex128)
    right[:q, :q] = ctranspose(pair.U)
    return Realization.from_matrix(left @ mid @ right, p, p)


def fuv_pointwise(pair, g_value, z):
    """``F_1 + F_2 F_3 / (z - F_4)`` with ``F = V diag(1, G(z)) U^*``.

    Args:
        pair: the unitary pair (U, V).
        g_value: the p x p value G(z), or a callable returning it.
        z: evaluation point.

    Raises:
        PoleHit: ``z - F_4(z)`` vanishes.
    """
    gz = g_value(z) if callable(g_value) else np.asarray(g_value, dtype=np.complex128)
    p = pair.p
    mid = np.eye(p + 1, dtype=np.complex128)
    mid[1:, 1:] = gz
    f = pair.V @ mid @ ctranspose(pair.U)
    den = complex(z) - f[p, p]
    if abs(den) <= 1e-14 * max(1.0, abs(z)):
        raise PoleHit("z - F_4(z) vanishes")
    return f[:p, :p] + np.outer(f[:p, p], f[p, :p]) / den


def phi_from_uv(pair, z, tol=DEFAULT_TOL):
    """The degree-one J-inner ``Phi`` with ``F_{U,V}(G) = T_Phi(G)``, evaluated at z.

    Raises:
        DegeneratePair: ``k_U`` and ``k_V`` both vanish.
        PoleHit: ``z = k_V / k_U``.
    """
    ku, kv = pair.k_U, pair.k_V
    if abs(ku) < tol.tol_rank and abs(kv) < tol.tol_rank:
        raise DegeneratePair("k_U and k_V both vanish; F_{U,V} is not an LFT")
    z = complex(z)
    den = kv - z * ku
    if abs(den) <= 1e-14:
        raise PoleHit(f"Phi has its pole at k_V/k_U = {kv / ku}")
    au, av = pair.alpha_U, pair.alpha_V
    bu_h, bv_h = pair.U[-1, 1:], pair.V[-1, 1:]
    return np.block([
        [pair.M_U + z * np.outer(au, bu_h) / den, -np.outer(au, bv_h) / den],
        [z * np.outer(av, bu_h) / den, pair.M_V - np.outer(av, bv_h) / den],
    ])


def _check_schur_vector(v, tol):
    nv = float(np.linalg.norm(v))
    if nv > 1.0 - tol.tol_contraction:
        raise SchurVectorTooLarge(nv, 1.0 - tol.tol_contraction)
    return nv


def uhat_vhat(u, v, w):
    """The unitary pair (U_hat, V_hat) with ``F_{U_hat,V_hat} = T_{Theta_hat(u,v,w)}``.

    With ``s = sqrt(1-|w|^2)``, ``r = sqrt(1-||v||^2)`` and
    ``d = sqrt(1-|w|^2 ||v||^2)``::

        U_hat = [[s/d u,      I - (1 + w r/d) u u^*],
                 [conj(w) r/d, s/d u^*           ]]
        V_hat = [[s/d v,      I - (1 - r/d) v v^*/||v||^2],
                 [r/d,        -s/d v^*                ]]

    For ``v = 0`` the projector term is dropped, which gives
    ``V_hat = [[0, I], [1, 0]]``.
    """
    u = as_cvector(u, "u")
    p = u.size
    v = as_cvector(v, "v", size=p)
    w = complex(w)
    nv2 = float(np.vdot(v, v).real)
    if nv2 >= 1.0:
        raise ValidationError(f"||v|| = {np.sqrt(nv2)!r} must be < 1")
    if abs(w) >= 1.0:
        raise ValidationError(f"|w| = {abs(w)!r} must be < 1")
    s = np.sqrt(1.0 - abs(w) ** 2)
    r = np.sqrt(1.0 - nv2)
    d = np.sqrt(1.0 - abs(w) ** 2 * nv2)
    eye = np.eye(p, dtype=np.complex128)
    uu = np.outer(u, np.conj(u))

    uh = np.empty((p + 1, p + 1), dtype=np.complex128)
    uh[:p, 0] = s / d * u
    uh[:p, 1:] = eye - (1.0 + w * r / d) * uu
    uh[p, 0] = np.conj(w) * r / d
    uh[p, 1:] = s / d * np.conj(u)

    vh = np.empty((p + 1, p + 1), dtype=np.complex128)
    vh[:p, 0] = s / d * v
    vh[:p, 1:] = eye if nv2 == 0.0 else eye - (1.0 - r / d) * np.outer(v, np.conj(v)) / nv2
    vh[p, 0] = r / d
    vh[p, 1:] = -s / d * np.conj(v)
    return UnitaryPair(uh, vh)


def interpolation_value(g, u, w, tol=DEFAULT_TOL):
    """``G(1/conj(w)) u``; for ``w = 0`` this is ``D u`` (value at infinity)."""
    w = complex(w)
    z = np.inf if w == 0 else 1.0 / np.conj(w)
    return evaluate(g, z, tol) @ as_cvector(u, "u", size=g.m)


def _check_step_args(u, w, p, tol):
    u = as_cvector(u, "u", size=p)
    if abs(np.linalg.norm(u) - 1.0) > 1e-12:
        raise ValidationError(f"||u|| = {np.linalg.norm(u)!r}, expected 1")
    w = complex(w)
    if abs(w) > 1.0 - tol.tol_contraction:
        raise ValidationError(f"|w| = {abs(w)!r} is not < 1")
    return u, w


def elementary_apply(u, v, w, g, tol=DEFAULT_TOL):
    """One forward Schur step: a balanced realization of ``T_{Theta_hat(u,v,w)}(G)``.

    The result has one more state and satisfies the interpolation condition
    ``G_new(1/conj(w)) u = v``.

    Raises:
        SchurVectorTooLarge: ``||v|| > 1 - tol_contraction``.
    """
    u, w = _check_step_args(u, w, g.p, tol)
    v = as_cvector(v, "v", size=g.p)
    _check_schur_vector(v, tol)
    return fuv_apply(uhat_vhat(u, v, w), g)


def _phase_from_output(t, pair, g_hat):
    # the output equation D alpha_U + k_U C t = alpha_V fixes the phase of t
    if pair.k_U == 0:
        return t
    ct = pair.k_U * (g_hat.C @ t)
    target = pair.alpha_V - g_hat.D @ pair.alpha_U
    ip = np.vdot(ct, target)
    if abs(ip) == 0:
        return t
    return t * (ip / abs(ip))


def elementary_deflate(u, w, g_hat, tol=DEFAULT_TOL):
    """One backward Schur step, the exact inverse of :func:`elementary_apply`.

    With ``v = G_hat(1/conj(w)) u``, the balanced realization of G_hat is put
    in the state basis in which it equals ``F_{U_hat,V_hat}`` applied to a
    degree n-1 realization, and that realization is read off. The first
    basis vector solves ``(k_V I - k_U A) t = B alpha_U`` (unique up to a
    phase, fixed by the output equation).

    Returns:
        (v, G) with G lossless-balanced of degree one less.

    Raises:
        SchurVectorTooLarge: ``||v|| > 1 - tol_contraction``.
        DeflationFailed: the transformed realization matrix does not split.
    """
    if g_hat.n == 0:
        raise DeflationFailed("cannot deflate a constant")
    u, w = _check_step_args(u, w, g_hat.p, tol)
    if unitarity_residual(g_hat.matrix) > tol.tol_unitary:
        try:
            g_hat = balance_lossless(g_hat, tol)
        except NotLossless as exc:
            raise DeflationFailed(str(exc)) from exc
    v = interpolation_value(g_hat, u, w, tol)
    _check_schur_vector(v, tol)
    pair = uhat_vhat(u, v, w)
    p, n1 = g_hat.p, g_hat.n
    t = np.linalg.solve(pair.k_V * np.eye(n1) - pair.k_U * g_hat.A, g_hat.B @ pair.alpha_U)
    nt = np.linalg.norm(t)
    if nt <= tol.tol_rank:
        raise DeflationFailed("no state direction carries the interpolation data")
    t = _phase_from_output(t / nt, pair, g_hat)
    tmat = np.hstack([t[:, None], unitary_completion(t[:, None], tol)])

    q = p + 1
    left = np.eye(p + n1, dtype=np.complex128)
    left[p:, p:] = ctranspose(tmat)
    right = np.eye(p + n1, dtype=np.complex128)
    right[p:, p:] = tmat
    r_hat = left @ g_hat.matrix @ right
    vl = np.eye(p + n1, dtype=np.complex128)
    vl[:q, :q] = ctranspose(pair.V)
    ur = np.eye(p + n1, dtype=np.complex128)
    ur[:q, :q] = pair.U
    mat = vl @ r_hat @ ur

    e1 = np.zeros(p + n1)
    e1[0] = 1.0
    defect = max(norm2(mat[:, 0] - e1), norm2(mat[0, :] - e1))
    if defect > np.sqrt(tol.tol_unitary):
        raise DeflationFailed(f"realization does not split after the inverse step (defect {defect:.3e})")
    return v, Realization.from_matrix(mat[1:, 1:], p, p)


def elementary_deflate_pointwise(u, v, w, g_hat_value, z, tol=DEFAULT_TOL):
    """Pointwise inverse of the forward step, an oracle for :func:`elementary_deflate`.

    ``G(z) = T_{H(conj(w) u v^*)^{-1}}(T_{H(u v^*)^{-1}}(G_hat(z)) (I - (1 - b_w(z)) u u^*))``.
    """
    u = as_cvector(u, "u")
    v = as_cvector(v, "v", size=u.size)
    gz = g_hat_value(z) if callable(g_hat_value) else np.asarray(g_hat_value)
    uv = np.outer(u, np.conj(v))
    r = lft_pointwise(halmos(-uv, tol), gz)
    r = r @ (np.eye(u.size) - (1.0 - blaschke(w, z)) * np.outer(u, np.conj(u)))
    return lft_pointwise(halmos(-np.conj(w) * uv, tol), r)
