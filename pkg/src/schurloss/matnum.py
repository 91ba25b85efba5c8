"""Dense complex matrix helpers, Stein equation solvers and unitary completion.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Everything here
is a pure function of its arguments; tolerances travel in an explicit
:class:`ToleranceProfile`.
"""

from dataclasses import dataclass, fields

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NotHermitian, NotIsometry, NotStable, ValidationError

#: Largest state dimension solved by the direct Kronecker (n^2 x n^2) system.
KRONECKER_MAX_N = 32

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ToleranceProfile:
    """Numerical thresholds shared by all operations.

    Attributes:
        tol_unitary: accepted deviation of ``R^* R`` from the identity.
        tol_rank: singular value / eigenvalue cut-off for rank decisions.
        tol_contraction: margin for strict inequalities such as ``||v|| < 1``.
        tol_roundtrip: accepted transfer-function mismatch after a roundtrip.
    """

    tol_unitary: float = 1e-8
    tol_rank: float = 1e-9
    tol_contraction: float = 1e-10
    tol_roundtrip: float = 1e-7

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (np.isfinite(value) and value > 0):
                raise ValidationError(f"{f.name} must be strictly positive, got {value!r}")


DEFAULT_TOL = ToleranceProfile()


def as_cmatrix(x, name="matrix", shape=None):
    """Return ``x`` as a finite 2-D complex128 array (always a fresh copy)."""
    a = np.array(x, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {a.shape}")
    if shape is not None and a.shape != tuple(shape):
        raise DimensionMismatch(f"{name} has shape {a.shape}, expected {tuple(shape)}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} contains NaN or Inf entries")
    return a


def as_cvector(x, name="vector", size=None):
    a = np.array(x, dtype=np.complex128).reshape(-1)
    if size is not None and a.shape[0] != size:
        raise DimensionMismatch(f"{name} has length {a.shape[0]}, expected {size}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} contains NaN or Inf entries")
    return a


def ctranspose(a):
    return np.conj(np.swapaxes(a, -1, -2))


def norm2(a):
    """Spectral norm; zero for empty matrices."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    if a.ndim == 1:
        return float(np.linalg.norm(a))
    return float(np.linalg.norm(a, 2))


def spectral_radius(a):
    a = np.asarray(a)
    if a.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def unitarity_residual(r):
    """max(||R^*R - I||_2, ||R R^* - I||_2) for a square matrix R."""
    r = np.asarray(r)
    if r.shape[0] != r.shape[1]:
        raise DimensionMismatch(f"unitarity residual needs a square matrix, got {r.shape}")
    if r.shape[0] == 0:
        return 0.0
    eye = np.eye(r.shape[0])
    return max(norm2(ctranspose(r) @ r - eye), norm2(r @ ctranspose(r) - eye))


def hermitian_part(a):
    return 0.5 * (a + ctranspose(a))


def hermitian_inv_sqrt(m, floor):
    """``M^{-1/2}`` for Hermitian positive definite ``M``, eigenvalues floored at ``floor``."""
    lam, vec = np.linalg.eigh(hermitian_part(m))
    lam = np.maximum(lam, floor)
    return (vec * lam ** -0.5) @ ctranspose(vec)


def hermitian_sqrt(m):
    lam, vec = np.linalg.eigh(hermitian_part(m))
    lam = np.maximum(lam, 0.0)
    return (vec * np.sqrt(lam)) @ ctranspose(vec)


def polar_unitary(a):
    """Unitary factor of the polar decomposition ``a = U P``."""
    if a.size == 0:
        return np.array(a, dtype=np.complex128)
    u, _ = scipy.linalg.polar(a)
    return u


def _check_stable(a, tol, what="A"):
    rho = spectral_radius(a)
    if rho >= 1.0 - tol.tol_contraction:
        raise NotStable(f"spectral radius of {what} is {rho:.12g} (needs < 1 - {tol.tol_contraction:g})")
    return rho


def _doubling_sum(a, q, b, max_iter=80):
    """Sum_k A^k Q B^k by repeated squaring (Smith doubling)."""
    x = q.copy()
    ak, bk = a.copy(), b.copy()
    for _ in range(max_iter):
        step = ak @ x @ bk
        x = x + step
        if np.linalg.norm(step) <= _EPS * max(np.linalg.norm(x), 1e-300):
            break
        ak = ak @ ak
        bk = bk @ bk
    return x


def solve_stein_sylvester(a, b, q):
    """Solve ``X - A X B = Q`` for X (A is n x n, B is m x m, both stable).

    Uses the Kronecker form ``(I - B^T kron A) vec(X) = vec(Q)`` for small
    problems and Smith doubling otherwise. Stability is not re-checked here.
    """
    a = as_cmatrix(a, "A")
    b = as_cmatrix(b, "B")
    q = as_cmatrix(q, "Q", shape=(a.shape[0], b.shape[0]))
    n, m = q.shape
    if n == 0 or m == 0:
        return np.zeros((n, m), dtype=np.complex128)
    if n <= KRONECKER_MAX_N and m <= KRONECKER_MAX_N:
        k = np.eye(n * m) - np.kron(b.T, a)
        x = np.linalg.solve(k, q.reshape(-1, order="F"))
        return x.reshape((n, m), order="F")
    return _doubling_sum(a, q, b)


def solve_stein(a, q, tol=DEFAULT_TOL):
    """Solve the Stein (discrete Lyapunov) equation ``W - A W A^* = Q``.

    Args:
        a: n x n matrix with spectral radius < 1.
        q: n x n Hermitian positive semi-definite right-hand side.
        tol: tolerance profile; ``tol_contraction`` is the stability margin.

    Returns:
        The unique Hermitian solution W, equal to sum_k A^k Q (A^*)^k.

    Raises:
        NotStable: spectral radius of A is within ``tol_contraction`` of 1.
        NotHermitian: Q is not Hermitian.
    """
    a = as_cmatrix(a, "A")
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionMismatch(f"A must be square, got {a.shape}")
    q = as_cmatrix(q, "Q", shape=(n, n))
    if n == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    qnorm = np.linalg.norm(q)
    if np.linalg.norm(q - ctranspose(q)) > tol.tol_unitary * (1.0 + qnorm):
        raise NotHermitian("right-hand side of the Stein equation is not Hermitian")
    _check_stable(a, tol)
    w = solve_stein_sylvester(a, ctranspose(a), hermitian_part(q))
    return hermitian_part(w)


def stein_residual(a, w, q):
    """Frobenius norm of ``W - A W A^* - Q``."""
    if w.size == 0:
        return 0.0
    return float(np.linalg.norm(w - a @ w @ ctranspose(a) - q))


def gramian_factor(a, b, tol=DEFAULT_TOL, max_iter=80):
    """Square factor L with ``L L^* = sum_k A^k B B^* (A^*)^k``.

    The factor is accumulated by Smith doubling with QR column compression,
    so it is accurate to working precision even where the Gramian itself is
    numerically singular. That is what rank decisions in balanced truncation
    need (the Gramian route loses half the digits).
    """
    a = as_cmatrix(a, "A")
    n = a.shape[0]
    b = as_cmatrix(b, "B")
    if b.shape[0] != n:
        raise DimensionMismatch(f"B has {b.shape[0]} rows, A is {n} x {n}")
    if n == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    _check_stable(a, tol)
    lf = b.copy()
    ak = a.copy()
    for _ in range(max_iter):
        step = ak @ lf
        lf = np.hstack([lf, step])
        if lf.shape[1] > n:
            r = np.linalg.qr(ctranspose(lf), mode="r")
            lf = ctranspose(r)
        if np.linalg.norm(step) <= _EPS * max(np.linalg.norm(lf), 1e-300):
            break
        ak = ak @ ak
    if lf.shape[1] < n:
        lf = np.hstack([lf, np.zeros((n, n - lf.shape[1]), dtype=np.complex128)])
    return lf


def _phase_normalize_columns(n):
    """Rotate each column so its largest-modulus entry is real positive."""
    out = n.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        i = int(np.argmax(np.abs(col)))
        if abs(col[i]) > 0:
            out[:, j] = col * (np.conj(col[i]) / abs(col[i]))
    return out


def unitary_completion(m, tol=DEFAULT_TOL):
    """Complete an isometry M ((n+p) x n) to a unitary matrix [M | N].

    N spans the orthogonal complement of range(M). It is taken from a
    column-pivoted QR of the projector ``I - M M^*`` and each column is
    phase-normalized (largest-modulus entry real positive), so the result
    is a deterministic function of M.

    Raises:
        NotIsometry: if ``||M^* M - I|| > tol_unitary``.
    """
    m = as_cmatrix(m, "M")
    rows, n = m.shape
    if rows < n:
        raise NotIsometry(f"M has more columns ({n}) than rows ({rows})")
    if n and norm2(ctranspose(m) @ m - np.eye(n)) > tol.tol_unitary:
        raise NotIsometry("columns of M are not orthonormal")
    p = rows - n
    if p == 0:
        return np.zeros((rows, 0), dtype=np.complex128)
    proj = np.eye(rows) - m @ ctranspose(m)
    q, _, _ = scipy.linalg.qr(proj, pivoting=True)
    nc = q[:, :p]
    # one re-orthogonalization pass against M
    nc = nc - m @ (ctranspose(m) @ nc)
    nc, _ = np.linalg.qr(nc)
    return _phase_normalize_columns(nc)


def haar_unitary(p, rng):
    """Haar-distributed p x p unitary matrix drawn from ``rng``."""
    if p == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    z = (rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_unit_vector(p, rng):
    x = rng.standard_normal(p) + 1j * rng.standard_normal(p)
    return x / np.linalg.norm(x)


def random_disk_point(rng, radius=1.0):
    """Uniform sample from the open disk of the given radius."""
    r = radius * np.sqrt(rng.uniform())
    return complex(r * np.exp(2j * np.pi * rng.uniform()))
