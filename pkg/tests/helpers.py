"""Shared constructors and oracles for the test suite."""

import numpy as np

from schurloss.matnum import ctranspose, haar_unitary, random_disk_point, random_unit_vector
from schurloss.realization import Realization, circle_points, evaluate
from schurloss.schur import random_schur_data, schur_reconstruct


ACCEPTANCE_LINES = []


def report_criterion(number, title, worst, limit, ok=None):
    """Record (and print) one acceptance line; returns the verdict."""
    ok = bool(worst < limit) if ok is None else bool(ok)
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}  (worst {worst:.3e}, limit {limit:.0e})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def cplx(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_contraction(rng, p, norm):
    e = cplx(rng, p, p)
    return norm * e / np.linalg.norm(e, 2)


def balanced_lossless(rng, n, p):
    return schur_reconstruct(random_schur_data(n, p, rng))


def scramble(g, rng):
    """Random (well-conditioned) similarity transform of g."""
    t = np.eye(g.n) + 0.3 * cplx(rng, g.n, g.n)
    return g.similar(t), t


def series_gramian(a, q, max_terms=100000):
    """Partial sums of sum_k A^k Q (A^*)^k until the term is at machine level."""
    w = q.copy()
    term = q.copy()
    for _ in range(max_terms):
        term = a @ term @ ctranspose(a)
        w = w + term
        if np.linalg.norm(term) <= 1e-18 * max(1.0, np.linalg.norm(w)):
            break
    return w


def max_transfer_error(g1, g2, zs):
    return max(np.linalg.norm(evaluate(g1, z) - evaluate(g2, z), 2) for z in zs)


def random_points(rng, k, lo=1.05, hi=3.0):
    """k random points outside the closed disk (away from poles of stable systems)."""
    r = rng.uniform(lo, hi, k)
    return r * np.exp(2j * np.pi * rng.uniform(size=k))


__all__ = [
    "ACCEPTANCE_LINES",
    "report_criterion",
    "cplx",
    "random_contraction",
    "balanced_lossless",
    "scramble",
    "series_gramian",
    "max_transfer_error",
    "random_points",
    "circle_points",
    "haar_unitary",
    "random_unit_vector",
    "random_disk_point",
    "Realization",
]
