"""The tangential Schur algorithm on balanced realizations.

A chart fixes interpolation points ``w_k`` and unit directions ``u_k`` for
``k = 1..n``. Its coordinates are the Schur vectors ``v_k`` (``||v_k|| < 1``)
and a unitary base ``D0``. Reconstruction starts from the constant ``D0`` and
applies the steps ``k = 1, 2, ..., n``; decomposition peels them off in the
order ``k = n, ..., 1``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    NoAdmissibleDirection,
    NotInChart,
    NotLossless,
    SchurVectorTooLarge,
    ValidationError,
)
from .lft import elementary_apply, elementary_deflate, interpolation_value
from .matnum import (
    DEFAULT_TOL,
    as_cmatrix,
    as_cvector,
    haar_unitary,
    norm2,
    random_disk_point,
    random_unit_vector,
    unitarity_residual,
)
from .realization import Realization, balance_lossless

FREE = "free"
FIXED = "fixed"


@dataclass(frozen=True, eq=False)
class Chart:
    """Interpolation data ``(w_k, u_k)`` for k = 1..n plus the base convention.

    Attributes:
        steps: tuple of ``(w, u)`` pairs, ``steps[k-1]`` belongs to step k.
        base: ``"free"`` (D0 is a coordinate) or ``"fixed"`` (D0 is part of
            the chart, giving a chart on the quotient by constant unitaries).
        D0: the fixed base for ``base="fixed"``; None otherwise.
    """

    steps: tuple
    base: str = FREE
    D0: np.ndarray = None

    def __post_init__(self):
        steps = []
        p = None
        for k, (w, u) in enumerate(self.steps, start=1):
            w = complex(w)
            u = as_cvector(u, f"u_{k}")
            if p is None:
                p = u.size
            elif u.size != p:
                raise DimensionMismatch(f"u_{k} has length {u.size}, expected {p}")
            if abs(w) > 1.0 - DEFAULT_TOL.tol_contraction:
                raise ValidationError(f"|w_{k}| = {abs(w)!r} is not < 1")
            if abs(np.linalg.norm(u) - 1.0) > 1e-12:
                raise ValidationError(f"||u_{k}|| = {np.linalg.norm(u)!r}, expected 1")
            u.setflags(write=False)
            steps.append((w, u))
        object.__setattr__(self, "steps", tuple(steps))
        if self.base not in (FREE, FIXED):
            raise ValidationError(f"base must be 'free' or 'fixed', got {self.base!r}")
        if self.base == FIXED:
            if self.D0 is None:
                raise ValidationError("a fixed-base chart needs D0")
            d0 = as_cmatrix(self.D0, "D0")
            if d0.shape[0] != d0.shape[1] or (p is not None and d0.shape[0] != p):
                raise DimensionMismatch(f"D0 has shape {d0.shape}")
            if unitarity_residual(d0) > DEFAULT_TOL.tol_unitary:
                raise ValidationError("D0 is not unitary")
            d0.setflags(write=False)
            object.__setattr__(self, "D0", d0)
        elif self.D0 is not None:
            raise ValidationError("D0 is only stored on fixed-base charts")

    @property
    def n(self):
        return len(self.steps)

    @property
    def w(self):
        return [s[0] for s in self.steps]

    @property
    def u(self):
        return [s[1] for s in self.steps]


@dataclass(frozen=True, eq=False)
class SchurData:
    """Chart plus coordinates: Schur vectors ``v[k-1]`` and the unitary base D0."""

    chart: Chart
    v: tuple
    D0: np.ndarray

    def __post_init__(self):
        d0 = as_cmatrix(self.D0, "D0")
        p = d0.shape[0]
        if d0.shape != (p, p):
            raise DimensionMismatch(f"D0 must be square, got {d0.shape}")
        if unitarity_residual(d0) > DEFAULT_TOL.tol_unitary:
            raise ValidationError(f"D0 is not unitary (residual {unitarity_residual(d0):.3e})")
        if self.chart.base == FIXED and norm2(d0 - self.chart.D0) > DEFAULT_TOL.tol_roundtrip:
            raise ValidationError("D0 differs from the chart's fixed base")
        if len(self.v) != self.chart.n:
            raise DimensionMismatch(f"{len(self.v)} Schur vectors for a chart with {self.chart.n} steps")
        vs = []
        for k, v in enumerate(self.v, start=1):
            v = as_cvector(v, f"v_{k}", size=p)
            if np.linalg.norm(v) > 1.0 - DEFAULT_TOL.tol_contraction:
                raise ValidationError(f"||v_{k}|| = {np.linalg.norm(v)!r} is not < 1")
            v.setflags(write=False)
            vs.append(v)
        if self.chart.n and self.chart.u[0].size != p:
            raise DimensionMismatch("chart directions and D0 disagree on p")
        d0.setflags(write=False)
        object.__setattr__(self, "v", tuple(vs))
        object.__setattr__(self, "D0", d0)

    @property
    def n(self):
        return self.chart.n

    @property
    def p(self):
        return self.D0.shape[0]


@dataclass(frozen=True)
class ChartReport:
    """Outcome of :func:`chart_contains`.

    ``per_step_norms[k-1]`` is ``||v_k||`` (NaN for steps not reached);
    ``failure_step`` is the failing step k, 0 for a fixed-base mismatch,
    -1 for a chart of the wrong length and None on success.
    """

    in_chart: bool
    per_step_norms: list = field(default_factory=list)
    failure_step: int = None
    margin: float = np.nan

    def as_dict(self):
        return {
            "in_chart": self.in_chart,
            "per_step_norms": [None if np.isnan(x) else float(x) for x in self.per_step_norms],
            "failure_step": self.failure_step,
            "margin": None if np.isnan(self.margin) else float(self.margin),
        }


def default_chart(n, p, base=FREE, d0=None):
    """All ``w_k = 0`` and ``u_k = e_{1 + ((k-1) mod p)}``."""
    eye = np.eye(p)
    steps = tuple((0.0, eye[(k - 1) % p]) for k in range(1, n + 1))
    if base == FIXED and d0 is None:
        d0 = np.eye(p)
    return Chart(steps, base, d0)


def schur_iterates(data, tol=DEFAULT_TOL):
    """All intermediate realizations ``[G^(0), G^(1), ..., G^(n)]`` of the forward recursion."""
    g = Realization.constant(data.D0)
    out = [g]
    for (w, u), v in zip(data.chart.steps, data.v):
        g = elementary_apply(u, v, w, g, tol)
        out.append(g)
    return out


def schur_reconstruct(data, tol=DEFAULT_TOL):
    """Balanced realization (unitary realization matrix) of degree n from Schur data."""
    return schur_iterates(data, tol)[-1]


def _prepare(g, chart, tol):
    if g.p != g.m:
        raise DimensionMismatch("lossless functions are square")
    if chart.n != g.n:
        raise DimensionMismatch(f"chart has {chart.n} steps but G has {g.n} states")
    if chart.n and chart.u[0].size != g.p:
        raise DimensionMismatch(f"chart directions have length {chart.u[0].size}, G is {g.p} x {g.p}")
    if unitarity_residual(g.matrix) > tol.tol_unitary:
        g = balance_lossless(g, tol)
    return g


def schur_decompose(g, chart, tol=DEFAULT_TOL):
    """Schur coordinates of a lossless G in the given chart.

    Raises:
        NotInChart: some ``||v_k|| > 1 - tol_contraction`` (``step = k``), or the
            final constant differs from a fixed base D0 (``step = 0``).
        DimensionMismatch: the chart length differs from the state dimension.
        NotLossless, NotMinimal: G cannot be balanced to a unitary realization matrix.
    """
    g = _prepare(g, chart, tol)
    vs = [None] * chart.n
    for k in range(chart.n, 0, -1):
        w, u = chart.steps[k - 1]
        try:
            vs[k - 1], g = elementary_deflate(u, w, g, tol)
        except SchurVectorTooLarge as exc:
            raise NotInChart(k, exc.norm) from exc
    d0 = g.D
    if chart.base == FIXED:
        gap = norm2(d0 - chart.D0)
        if gap > tol.tol_roundtrip:
            raise NotInChart(0, gap, f"final constant differs from the fixed base by {gap:.3e}")
        d0 = chart.D0
    return SchurData(chart, tuple(vs), d0)


def chart_contains(g, chart, tol=DEFAULT_TOL):
    """Report whether G lies in the chart's domain; never raises on a domain failure."""
    norms = [np.nan] * chart.n
    if chart.n != g.n or g.p != g.m or (chart.n and chart.u[0].size != g.p):
        return ChartReport(False, norms, -1)
    try:
        g = _prepare(g, chart, tol)
    except (NotLossless, ValidationError, ArithmeticError):
        return ChartReport(False, norms, -1)
    limit = 1.0 - tol.tol_contraction
    for k in range(chart.n, 0, -1):
        w, u = chart.steps[k - 1]
        nv = float(np.linalg.norm(interpolation_value(g, u, w, tol)))
        norms[k - 1] = nv
        if nv > limit:
            return ChartReport(False, norms, k, limit - max(x for x in norms if not np.isnan(x)))
        _, g = elementary_deflate(u, w, g, tol)
    margin = limit - max(norms) if norms else np.inf
    if chart.base == FIXED:
        gap = norm2(g.D - chart.D0)
        if gap > tol.tol_roundtrip:
            return ChartReport(False, norms, 0, margin)
    return ChartReport(True, norms, None, margin)


def pick_direction(g, w, basis, tol=DEFAULT_TOL, min_norm=False):
    """Choose an admissible direction u for interpolation at w.

    Returns the first basis vector with ``||G(1/conj(w)) u|| <= 1 - tol_contraction``,
    or the one of smallest norm when ``min_norm`` is set.

    Returns:
        (u, v) with ``v = G(1/conj(w)) u``.

    Raises:
        NoAdmissibleDirection: no basis vector qualifies.
    """
    limit = 1.0 - tol.tol_contraction
    best = None
    for u in basis:
        u = as_cvector(u, "u", size=g.m)
        v = interpolation_value(g, u, w, tol)
        nv = np.linalg.norm(v)
        if nv > limit:
            continue
        if not min_norm:
            return u, v
        if best is None or nv < best[2]:
            best = (u, v, nv)
    if best is None:
        raise NoAdmissibleDirection(f"no basis direction gives ||v|| < 1 at w = {complex(w)}")
    return best[0], best[1]


def adapted_chart(g, ws, basis=None, tol=DEFAULT_TOL, min_norm=True):
    """Build a chart containing G by picking directions step by step at the given points."""
    if len(ws) != g.n:
        raise DimensionMismatch(f"{len(ws)} interpolation points for degree {g.n}")
    if unitarity_residual(g.matrix) > tol.tol_unitary:
        g = balance_lossless(g, tol)
    basis = list(np.eye(g.p)) if basis is None else basis
    steps = [None] * g.n
    for k in range(g.n, 0, -1):
        u, _ = pick_direction(g, ws[k - 1], basis, tol, min_norm)
        steps[k - 1] = (ws[k - 1], u)
        _, g = elementary_deflate(u, ws[k - 1], g, tol)
    return Chart(tuple(steps))


def random_schur_data(n, p, rng, w_radius=0.8, v_radius=0.5):
    """Random free-base Schur data: disk points, unit directions, Schur vectors, Haar D0."""
    steps = []
    vs = []
    for _ in range(n):
        steps.append((random_disk_point(rng, w_radius), random_unit_vector(p, rng)))
        vs.append(v_radius * rng.uniform() * random_unit_vector(p, rng))
    return SchurData(Chart(tuple(steps)), tuple(vs), haar_unitary(p, rng))
