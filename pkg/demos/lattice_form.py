"""
Positive upper Hessenberg realizations
======================================

For scalar systems with every interpolation point at zero, the Schur
balanced realization has an upper Hessenberg state matrix whose
subdiagonal is real and positive, the state-space form of a lattice filter.
"""

import numpy as np

from schurloss import SchurData, default_chart, schur_reconstruct

rng = np.random.default_rng(4)
n = 5
v = tuple(np.array([0.6 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())]) for _ in range(n))
g = schur_reconstruct(SchurData(default_chart(n, 1), v, np.eye(1)))

np.set_printoptions(precision=3, suppress=True, linewidth=120)
print("|A|:")
print(np.abs(g.A))
print("subdiagonal:", np.diag(g.A, -1))
print("largest entry below the subdiagonal:", np.max(np.abs(np.tril(g.A, -2))))
