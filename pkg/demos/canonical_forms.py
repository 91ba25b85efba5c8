"""
Output-normal canonical form of a stable system
===============================================

Two realizations of the same stable system, related by a random change of
state coordinates, are mapped to one and the same canonical realization.
"""

import numpy as np

from schurloss import StableSystem, default_chart, output_normal_form, random_stable
from schurloss.realization import circle_points, evaluate, gramians

rng = np.random.default_rng(1)
g = random_stable(4, 1, 2, seed=11)
t = np.eye(4) + 0.3 * rng.standard_normal((4, 4))
h = g.similar(t)

chart = default_chart(4, 2)
cg, _ = output_normal_form(StableSystem(g), chart)
ch, _ = output_normal_form(StableSystem(h), chart)

print("difference of the raw realizations:", np.max(np.abs(g.A - h.A)))
print("difference of the canonical forms:", max(np.max(np.abs(getattr(cg, k) - getattr(ch, k))) for k in "ABCD"))
print("||Wo - I|| of the canonical form:", np.linalg.norm(gramians(cg).Wo - np.eye(4), 2))
err = max(np.linalg.norm(evaluate(g, z) - evaluate(cg, z), 2) for z in circle_points(16))
print("transfer function error:", err)
