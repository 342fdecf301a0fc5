"""
Field lines and linking numbers
===============================

Trace magnetic and electric lines at T = 0 and measure how they link.
For (n, m, l, s) every pair of B lines links n*m times and every pair of
E lines l*s times.
"""

import numpy as np

from emknot import KnotParams, linking_matrix

for ints, field in [((1, 1, 1, 1), "B"), ((2, 3, 1, 1), "B"), ((2, 3, 1, 1), "E")]:
    M = linking_matrix(KnotParams(*ints), field, 0.0)
    lengths = ", ".join(f"{c.arc_length:.2f}" for c in M.curves)
    print(f"{ints} {field}: line lengths [{lengths}]")
    with np.printoptions(precision=4, suppress=True):
        print(M.values)
