"""
One interpolation step and its inverse
======================================

A single Schur step raises the degree by one and imposes the tangential
condition ``G(1/conj(w)) u = v``. Deflation recovers both v and the smaller
system.
"""

import numpy as np

from schurloss import elementary_apply, elementary_deflate, random_lossless, winding_degree
from schurloss.lft import elementary_deflate_pointwise, interpolation_value
from schurloss.realization import circle_points, evaluate

g = random_lossless(2, 2, seed=3)

u = np.array([1.0, 1.0j]) / np.sqrt(2)
v = np.array([0.3, -0.2 + 0.1j])
w = 0.4 - 0.3j

g_hat = elementary_apply(u, v, w, g)
print("degree before / after:", winding_degree(g), winding_degree(g_hat))
print("interpolation residual:", np.linalg.norm(interpolation_value(g_hat, u, w) - v))

# exact inverse on the realization
v_back, g_back = elementary_deflate(u, w, g_hat)
print("recovered v:", np.round(v_back, 12))
err = max(np.linalg.norm(evaluate(g, z) - evaluate(g_back, z), 2) for z in circle_points(32))
print("transfer function error on the circle:", err)

# the same inverse computed pointwise with linear fractional maps
z = 1.5 * np.exp(0.7j)
ref = elementary_deflate_pointwise(u, v, w, lambda s: evaluate(g_hat, s), z)
print("pointwise inverse vs realization:", np.linalg.norm(ref - evaluate(g, z)))
