"""
Closed-form knot fields
=======================

Evaluate E and B of the Hopfion and of a non-null member of the family,
and check the vacuum equations by finite differences.
"""

import numpy as np

from emknot import KnotParams, eval_eb
from emknot.verify import closed_form_residuals

hopfion = KnotParams.hopfion()
E, B = eval_eb(0.0, 0.0, 0.0, 0.0, hopfion)
print("Hopfion at the origin, T=0:  E =", E, " B =", B)

###############################################################################
# The Hopfion is a null field at every point and every time.

rng = np.random.default_rng(0)
pts = rng.uniform(-3, 3, size=(1000, 3))
for T in (0.0, 1.0):
    E, B = eval_eb(pts[:, 0], pts[:, 1], pts[:, 2], T, hopfion)
    cos = np.abs(np.sum(E * B, -1)) / (np.linalg.norm(E, axis=-1) * np.linalg.norm(B, axis=-1))
    print(f"T={T}: max |E.B|/(|E||B|) = {cos.max():.1e}")

###############################################################################
# (1,2,1,1) is a solution too, but E and B are no longer orthogonal.

mixed = KnotParams(1, 2, 1, 1)
E, B = eval_eb(pts[:, 0], pts[:, 1], pts[:, 2], 0.0, mixed)
cos = np.abs(np.sum(E * B, -1)) / (np.linalg.norm(E, axis=-1) * np.linalg.norm(B, axis=-1))
print(f"(1,2,1,1): max |E.B|/(|E||B|) = {cos.max():.3f}")

###############################################################################
# Central differences with h = 1e-3 leave O(h^2) residuals.

for p in (hopfion, mixed):
    div, curl = closed_form_residuals(p, npoints=20)
    print(f"{p.integers}: max divergence {div:.1e}, max curl residual {curl:.1e}")
