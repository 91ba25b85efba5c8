"""State-space realizations of discrete-time systems.

A :class:`Realization` is the quadruple (A, B, C, D) with transfer matrix
``G(z) = D + C (zI - A)^{-1} B``. Lossless (stable all-pass) systems have a
balanced realization whose realization matrix ``[[D, C], [B, A]]`` is
unitary; most of this module is about producing and certifying that form.
"""

import cmath
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatch,
    NotLossless,
    NotMinimal,
    NotStable,
    PoleHit,
    WindingAmbiguous,
)
from .matnum import (
    DEFAULT_TOL,
    as_cmatrix,
    ctranspose,
    gramian_factor,
    norm2,
    solve_stein,
    spectral_radius,
    unitarity_residual,
)

CIRCLE_POINTS = 64
WINDING_POINTS = 1024
WINDING_REFINE = 8


def _empty_as(x, shape):
    # [] carries no shape information; give it the expected empty shape
    if np.size(x) == 0 and 0 in shape:
        return np.zeros(shape)
    return x


@dataclass(frozen=True, eq=False)
class Realization:
    """Immutable realization (A, B, C, D) with shapes (n,n), (n,m), (p,n), (p,m)."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        d = as_cmatrix(self.D, "D")
        p, m = d.shape
        a = as_cmatrix(_empty_as(self.A, (0, 0)), "A")
        n = a.shape[0]
        if a.shape != (n, n):
            raise DimensionMismatch(f"A must be square, got {a.shape}")
        b = as_cmatrix(_empty_as(self.B, (n, m)), "B", shape=(n, m))
        c = as_cmatrix(_empty_as(self.C, (p, n)), "C", shape=(p, n))
        for name, arr in (("A", a), ("B", b), ("C", c), ("D", d)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def m(self):
        return self.D.shape[1]

    @property
    def p(self):
        return self.D.shape[0]

    @classmethod
    def constant(cls, d):
        """Zero-state realization of the constant transfer matrix ``d``."""
        d = as_cmatrix(d, "D")
        p, m = d.shape
        return cls(np.zeros((0, 0)), np.zeros((0, m)), np.zeros((p, 0)), d)

    @classmethod
    def from_matrix(cls, r, p, m):
        """Split a realization matrix ``[[D, C], [B, A]]`` with D of size p x m."""
        r = as_cmatrix(r, "R")
        n = r.shape[0] - p
        if n < 0 or r.shape != (p + n, m + n):
            raise DimensionMismatch(f"realization matrix {r.shape} incompatible with p={p}, m={m}")
        return cls(r[p:, m:], r[p:, :m], r[:p, m:], r[:p, :m])

    @property
    def matrix(self):
        """The realization matrix ``[[D, C], [B, A]]``."""
        return np.block([[self.D, self.C], [self.B, self.A]])

    def similar(self, t):
        """Realization ``(T^{-1} A T, T^{-1} B, C T, D)``."""
        t = as_cmatrix(t, "T", shape=(self.n, self.n))
        ti_a = np.linalg.solve(t, self.A)
        return Realization(ti_a @ t, np.linalg.solve(t, self.B), self.C @ t, self.D)

    def dual(self):
        """Conjugate-transpose system ``(A^*, C^*, B^*, D^*)``."""
        return Realization(ctranspose(self.A), ctranspose(self.C), ctranspose(self.B), ctranspose(self.D))

    def __call__(self, z, tol=DEFAULT_TOL):
        return evaluate(self, z, tol)

    def __repr__(self):
        return f"Realization(n={self.n}, m={self.m}, p={self.p})"


@dataclass(frozen=True, eq=False)
class GramianPair:
    Wc: np.ndarray
    Wo: np.ndarray


@dataclass(frozen=True)
class LosslessCertificate:
    """Residuals produced by :func:`is_lossless`.

    ``unitarity_residual`` is measured on the realization matrix after
    balancing (or as given, whichever is smaller); ``circle_residual`` is
    ``max ||G(z)^* G(z) - I||`` over sample points on the unit circle.
    """

    unitarity_residual: float
    raw_unitarity_residual: float
    spectral_radius: float
    stability_margin: float
    circle_residual: float

    def passes(self, tol=DEFAULT_TOL):
        return (
            self.unitarity_residual <= tol.tol_unitary
            and self.circle_residual <= tol.tol_unitary
            and (self.stability_margin > 0 or self.raw_unitarity_residual <= tol.tol_unitary)
        )

    def as_dict(self):
        return {
            "unitarity_residual": self.unitarity_residual,
            "raw_unitarity_residual": self.raw_unitarity_residual,
            "spectral_radius": self.spectral_radius,
            "stability_margin": self.stability_margin,
            "circle_residual": self.circle_residual,
        }


def is_infinite(z):
    return z is None or cmath.isinf(complex(z))


def evaluate(g, z, tol=DEFAULT_TOL):
    """Transfer matrix ``G(z)``. Pass ``z = inf`` (or None) to get ``G(inf) = D``.

    Raises:
        PoleHit: if ``zI - A`` is singular to within ``tol_rank``.
    """
    if is_infinite(z) or g.n == 0:
        return g.D.copy()
    z = complex(z)
    m = z * np.eye(g.n) - g.A
    if np.linalg.svd(m, compute_uv=False)[-1] <= tol.tol_rank:
        raise PoleHit(f"z = {z} is (numerically) an eigenvalue of A")
    return g.D + g.C @ np.linalg.solve(m, g.B)


def evaluate_many(g, zs, tol=DEFAULT_TOL):
    """Vectorized :func:`evaluate` over finite points; returns shape (k, p, m)."""
    zs = np.asarray(zs, dtype=np.complex128).reshape(-1)
    if g.n == 0:
        return np.broadcast_to(g.D, (zs.size,) + g.D.shape).copy()
    m = zs[:, None, None] * np.eye(g.n) - g.A
    smin = np.linalg.svd(m, compute_uv=False)[:, -1]
    if np.any(smin <= tol.tol_rank):
        raise PoleHit(f"z = {zs[np.argmin(smin)]} is (numerically) an eigenvalue of A")
    x = np.linalg.solve(m, np.broadcast_to(g.B, (zs.size,) + g.B.shape))
    return g.D + g.C @ x


def evaluate_sharp(g, z, tol=DEFAULT_TOL):
    """``G^#(z) = G(1/conj(z))^*``; z = 0 maps to the value at infinity."""
    if is_infinite(z):
        w = 0.0
    elif complex(z) == 0:
        w = np.inf
    else:
        w = 1.0 / np.conj(complex(z))
    return ctranspose(evaluate(g, w, tol))


def circle_points(k, offset=0.5):
    """k equispaced points on the unit circle, shifted by ``offset`` grid steps."""
    return np.exp(2j * np.pi * (np.arange(k) + offset) / k)


def gramians(g, tol=DEFAULT_TOL):
    """Controllability and observability Gramians.

    Solves ``Wc - A Wc A^* = B B^*`` and ``Wo - A^* Wo A = C^* C``.
    """
    wc = solve_stein(g.A, g.B @ ctranspose(g.B), tol)
    wo = solve_stein(ctranspose(g.A), ctranspose(g.C) @ g.C, tol)
    return GramianPair(wc, wo)


def _is_positive_definite(w, tol):
    if w.shape[0] == 0:
        return True
    lam = np.linalg.eigvalsh(w)
    return lam[0] > tol.tol_rank * max(1.0, lam[-1])


def balance_lossless(g, tol=DEFAULT_TOL):
    """Balanced realization of a minimal lossless system.

    The state transformation is the Cholesky factor T of the controllability
    Gramian (``Wc = T T^*``), after which the realization matrix of a
    lossless system is unitary.

    Raises:
        NotMinimal: a Gramian is singular within ``tol_rank``.
        NotLossless: the balanced realization matrix is not unitary.
    """
    if g.n == 0:
        res = unitarity_residual(g.D) if g.p == g.m else np.inf
        if res > tol.tol_unitary:
            raise NotLossless(f"constant D is not unitary (residual {res:.3e})")
        return g
    gp = gramians(g, tol)
    if not (_is_positive_definite(gp.Wc, tol) and _is_positive_definite(gp.Wo, tol)):
        raise NotMinimal("a Gramian is singular; realization is not minimal")
    out = _cholesky_balance(g, gp.Wc)
    res = unitarity_residual(out.matrix) if g.p == g.m else np.inf
    if res > tol.tol_unitary:
        raise NotLossless(f"balanced realization matrix is not unitary (residual {res:.3e})")
    return out


def _cholesky_balance(g, wc):
    t = np.linalg.cholesky(wc)
    a = scipy.linalg.solve_triangular(t, g.A @ t, lower=True)
    b = scipy.linalg.solve_triangular(t, g.B, lower=True)
    return Realization(a, b, g.C @ t, g.D)


def cascade(g1, g2):
    """Series connection with transfer function ``G1(z) G2(z)``.

    The state vector is ``[x2; x1]``::

        [D C]   [D1 D2 | D1 C2  C1]
        [B A] = [B2    | A2     0 ]
                [B1 D2 | B1 C2  A1]

    Unitary realization matrices are preserved.
    """
    if g1.m != g2.p:
        raise DimensionMismatch(f"cannot cascade: G1 has {g1.m} inputs, G2 has {g2.p} outputs")
    n1, n2 = g1.n, g2.n
    a = np.block([
        [g2.A, np.zeros((n2, n1))],
        [g1.B @ g2.C, g1.A],
    ])
    b = np.vstack([g2.B, g1.B @ g2.D])
    c = np.hstack([g1.D @ g2.C, g1.C])
    return Realization(a, b, c, g1.D @ g2.D)


def hankel_singular_values(g, tol=DEFAULT_TOL):
    if g.n == 0:
        return np.zeros(0)
    lc = gramian_factor(g.A, g.B, tol)
    lo = gramian_factor(ctranspose(g.A), ctranspose(g.C), tol)
    return np.linalg.svd(ctranspose(lo) @ lc, compute_uv=False)


def minimal_reduce(g, tol=DEFAULT_TOL):
    """Remove unreachable/unobservable states by square-root balanced truncation.

    Hankel singular values at or below ``tol_rank * max(1, sigma_max)`` are
    discarded. Gramian factors come from :func:`gramian_factor`, so the rank
    decision is made at working precision. A realization that is already
    minimal is returned unchanged.
    """
    if g.n == 0:
        return g
    lc = gramian_factor(g.A, g.B, tol)
    lo = gramian_factor(ctranspose(g.A), ctranspose(g.C), tol)
    u, s, vh = np.linalg.svd(ctranspose(lo) @ lc)
    r = int(np.sum(s > tol.tol_rank * max(1.0, s[0] if s.size else 0.0)))
    if r == g.n:
        return g
    scale = s[:r] ** -0.5
    right = (lc @ ctranspose(vh[:r])) * scale
    left = (ctranspose(u[:, :r]) @ ctranspose(lo)) * scale[:, None]
    return Realization(left @ g.A @ right, left @ g.B, g.C @ right, g.D)


def is_lossless(g, tol=DEFAULT_TOL, n_points=CIRCLE_POINTS):
    """Two-way losslessness certificate; never raises on non-lossless input.

    Algebraic: unitarity residual of the realization matrix after Cholesky
    balancing. Analytic: ``max ||G(z)^* G(z) - I||_2`` over ``n_points``
    points of the unit circle. Also reports the spectral radius of A.
    """
    raw = unitarity_residual(g.matrix) if g.p == g.m else np.inf
    rho = spectral_radius(g.A)
    balanced = raw
    if g.n and g.p == g.m and rho < 1.0 - tol.tol_contraction:
        try:
            wc = solve_stein(g.A, g.B @ ctranspose(g.B), tol)
            balanced = min(raw, unitarity_residual(_cholesky_balance(g, wc).matrix))
        except np.linalg.LinAlgError:
            pass
    try:
        vals = evaluate_many(g, circle_points(n_points), tol)
        gram = ctranspose(vals) @ vals - np.eye(g.m)
        circle = float(max(np.linalg.norm(x, 2) for x in gram))
    except PoleHit:
        circle = np.inf
    return LosslessCertificate(
        unitarity_residual=float(balanced),
        raw_unitarity_residual=float(raw),
        spectral_radius=rho,
        stability_margin=1.0 - rho,
        circle_residual=circle,
    )


def _phase_rate_bound(g):
    # max |d/dtheta arg det G| for a Blaschke-product determinant with these poles
    mods = np.abs(np.linalg.eigvals(g.A)) if g.n else np.zeros(0)
    if np.any(mods >= 1.0):
        return np.inf
    return float(np.sum((1.0 + mods) / (1.0 - mods)))


def _winding_on_grid(g, k, tol):
    if _phase_rate_bound(g) * 2 * np.pi / k > np.pi / 2:
        return None
    z = np.exp(2j * np.pi * np.arange(k + 1) / k)
    dets = np.linalg.det(evaluate_many(g, z, tol))
    if np.min(np.abs(dets)) <= tol.tol_rank:
        return None
    steps = np.angle(dets[1:] / dets[:-1])
    if np.max(np.abs(steps)) > np.pi / 2:
        return None
    return int(round(np.sum(steps) / (2 * np.pi)))


def winding_degree(g, tol=DEFAULT_TOL, n_points=WINDING_POINTS):
    """Minus the winding number of ``det G(e^{i theta})`` around the origin.

    Equals the McMillan degree for a lossless G. If a phase step between
    consecutive grid points exceeds pi/2 the grid is refined once
    (``WINDING_REFINE`` times denser) before giving up. Steps are judged both
    from the samples and from an a priori bound on the phase rate computed
    from the poles, so poles hugging the circle cannot alias a full turn.

    Raises:
        WindingAmbiguous: the phase cannot be tracked on the refined grid.
    """
    if g.p != g.m:
        raise DimensionMismatch("winding degree needs a square transfer matrix")
    for k in (n_points, n_points * WINDING_REFINE):
        wind = _winding_on_grid(g, k, tol)
        if wind is not None:
            return -wind
    raise WindingAmbiguous("phase of det G jumps by more than pi/2 between grid points")


def random_lossless(n, p, seed):
    """Random lossless-balanced realization of exact McMillan degree n.

    Built by the tangential Schur recursion from a random chart and random
    Schur vectors; deterministic for a given seed.
    """
    from .schur import random_schur_data, schur_reconstruct

    return schur_reconstruct(random_schur_data(n, p, np.random.default_rng(seed)))


def random_stable(n, m, p, seed, radius=0.9):
    """Random complex stable realization with spectral radius ``radius``."""
    rng = np.random.default_rng(seed)

    def cplx(*shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    a = cplx(n, n)
    if n:
        a *= radius / max(spectral_radius(a), 1e-12)
    return Realization(a, cplx(n, m), cplx(p, n), cplx(p, m))


def check_stable(g, tol=DEFAULT_TOL):
    rho = spectral_radius(g.A)
    if rho >= 1.0 - tol.tol_contraction:
        raise NotStable(f"spectral radius {rho:.12g}")
    return rho


__all__ = [
    "Realization",
    "GramianPair",
    "LosslessCertificate",
    "evaluate",
    "evaluate_many",
    "evaluate_sharp",
    "gramians",
    "balance_lossless",
    "cascade",
    "minimal_reduce",
    "hankel_singular_values",
    "is_lossless",
    "winding_degree",
    "random_lossless",
    "random_stable",
    "circle_points",
]
