"""
Schur coordinates of a lossless system
======================================

Random Schur data is turned into a balanced realization, certified as
lossless, and decomposed again in the same chart.
"""

import numpy as np

from schurloss import (
    is_lossless,
    random_schur_data,
    schur_decompose,
    schur_reconstruct,
    winding_degree,
)
from schurloss.matnum import unitarity_residual

rng = np.random.default_rng(0)

# degree 5, 2 x 2 transfer matrix
data = random_schur_data(5, 2, rng)
print("Schur vector norms:", np.round([np.linalg.norm(v) for v in data.v], 3))

# forward recursion: five elementary steps starting from the constant D0
g = schur_reconstruct(data)
print("state dimension:", g.n)
print("||R^* R - I||:", unitarity_residual(g.matrix))
print("winding number of det G on the circle:", winding_degree(g))

cert = is_lossless(g)
print("lossless certificate passes:", cert.passes())

# backward recursion in the same chart gives the coordinates back
back = schur_decompose(g, data.chart)
err = max(np.max(np.abs(a - b)) for a, b in zip(data.v, back.v))
print("largest coordinate error:", err)
print("D0 error:", np.max(np.abs(data.D0 - back.D0)))
