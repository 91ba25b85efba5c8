"""Output-normal and input-normal canonical forms of stable systems.

A stable minimal system is brought to observability Gramian I, its pair
(A, C) is completed to a lossless system, and the Schur balanced form of that
lossless system in a chart supplies the canonical (A, C). B follows from the
state transformation; D is untouched.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NotMinimal, NotOutputNormal
from .matnum import (
    DEFAULT_TOL,
    as_cmatrix,
    ctranspose,
    gramian_factor,
    norm2,
    polar_unitary,
    solve_stein_sylvester,
    unitary_completion,
)
from .realization import Realization, check_stable, evaluate, hankel_singular_values
from .schur import schur_decompose, schur_reconstruct


@dataclass(frozen=True, eq=False)
class StableSystem:
    """A minimal realization with spectral radius of A below ``1 - tol_contraction``."""

    realization: Realization

    def __post_init__(self):
        g = self.realization
        check_stable(g, DEFAULT_TOL)
        hsv = hankel_singular_values(g, DEFAULT_TOL)
        if hsv.size and hsv[-1] <= DEFAULT_TOL.tol_rank * max(1.0, hsv[0]):
            raise NotMinimal(f"realization is not minimal (smallest Hankel singular value {hsv[-1]:.3e})")

    @property
    def n(self):
        return self.realization.n


def _as_realization(s):
    return s.realization if isinstance(s, StableSystem) else s


def lossless_completion(a, c, tol=DEFAULT_TOL):
    """Complete an output-normal pair (A, C) to a lossless system (A, B~, C, D~).

    The block column ``[C; A]`` has orthonormal columns and is completed to a
    unitary realization matrix ``[[D~, C], [B~, A]]``. The completion is then
    multiplied on the right by the constant unitary that makes the transfer
    function equal to I at z = 1, so the result depends only on (A, C) and
    is unchanged when (A, C) undergoes a unitary state transformation.

    Raises:
        NotOutputNormal: ``||A^* A + C^* C - I|| > tol_unitary``.
    """
    a = as_cmatrix(a, "A")
    n = a.shape[0]
    c = as_cmatrix(c, "C")
    if a.shape != (n, n) or c.shape[1] != n:
        raise NotOutputNormal(f"incompatible shapes A {a.shape}, C {c.shape}")
    p = c.shape[0]
    res = norm2(ctranspose(a) @ a + ctranspose(c) @ c - np.eye(n))
    if res > tol.tol_unitary:
        raise NotOutputNormal(f"A^*A + C^*C differs from I by {res:.3e}")
    comp = unitary_completion(np.vstack([c, a]), tol)
    d_t, b_t = comp[:p], comp[p:]
    g1 = evaluate(Realization(a, b_t, c, d_t), 1.0, tol)
    # right factor fixing G(1) = I; the polar step removes roundoff
    fix = polar_unitary(ctranspose(g1))
    return b_t @ fix, d_t @ fix


def _output_normalize(g, tol):
    # upper triangular R with Wo = R^* R from the square-root factor, so the
    # conditioning of Wo is not squared as in a Cholesky of Wo itself
    lf = gramian_factor(ctranspose(g.A), ctranspose(g.C), tol)
    lh = np.linalg.qr(ctranspose(lf), mode="r")
    d = np.diag(lh)
    if np.min(np.abs(d)) <= tol.tol_rank * max(1.0, np.max(np.abs(d))):
        raise NotMinimal("observability Gramian is not positive definite")
    lh = (np.conj(d) / np.abs(d))[:, None] * lh
    # state x1 = R x
    linv = scipy.linalg.solve_triangular(lh, np.eye(g.n), lower=False)
    return lh @ g.A @ linv, lh @ g.B, g.C @ linv, lh


def output_normal_form(s, chart, tol=DEFAULT_TOL):
    """Canonical output-normal realization of a stable system in a chart.

    Returns:
        (realization, T): ``(A_b, T B, C_b, D)`` with observability Gramian I
        and the state transformation T with ``A_b = T A T^{-1}``, ``C_b = C T^{-1}``.

    Raises:
        NotInChart: the lossless completion is outside the chart's domain.
        NotMinimal: the system is not observable.
    """
    g = _as_realization(s)
    check_stable(g, tol)
    if g.n == 0:
        return g, np.zeros((0, 0), dtype=np.complex128)
    a1, _, c1, lh = _output_normalize(g, tol)
    b_t, d_t = lossless_completion(a1, c1, tol)
    lossless = Realization(a1, b_t, c1, d_t)
    schur = schur_reconstruct(schur_decompose(lossless, chart, tol), tol)
    # x_b = T2 x1 where T2 solves X - A_b X A1^* = B_b B~^*
    t2 = solve_stein_sylvester(schur.A, ctranspose(a1), schur.B @ ctranspose(b_t))
    t2 = polar_unitary(t2)
    t = t2 @ lh
    return Realization(schur.A, t @ g.B, schur.C, g.D), t


def input_normal_form(s, chart, tol=DEFAULT_TOL):
    """Canonical input-normal realization, by duality with :func:`output_normal_form`.

    The conjugate-transpose system is put in output-normal form and dualized
    back, so the chart directions are m-vectors (m = number of inputs).

    Returns:
        (realization, T) with controllability Gramian I and ``A_out = T A T^{-1}``.
    """
    g = _as_realization(s)
    out, t_dual = output_normal_form(g.dual(), chart, tol)
    if g.n == 0:
        return out.dual(), t_dual
    return out.dual(), np.linalg.inv(ctranspose(t_dual))
