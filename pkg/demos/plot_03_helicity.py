"""
Helicity and photon numbers
===========================

Photon numbers come from a k-space quadrature of the circular-polarisation
amplitudes. The real-space helicity integrals over the grid should add up to
hbar (N_R - N_L).
"""

from emknot import GridSpec, KnotParams, knot_state
from emknot import helicity

for ints in [(1, 1, 1, 1), (2, 3, 4, 5), (1, 2, 1, 2)]:
    pn = helicity.photon_numbers(KnotParams(*ints))
    print(f"{ints}: N_R = {pn.N_R:.10f} (closed {pn.N_R_closed}), N_L = {pn.N_L:.10f} (closed {pn.N_L_closed})")

###############################################################################
# For the Hopfion the magnetic and electric parts are equal and constant.

grid = GridSpec(64, 8.0)
hop = knot_state(grid, KnotParams.hopfion())
for T in (0.0, 0.5, 1.0):
    h_m, h_e = helicity.helicity_at(hop, T)
    print(f"Hopfion T={T}: h_m={h_m:.5f} h_e={h_e:.5f} h={h_m + h_e:.5f}")

###############################################################################
# For (1,2,1,1) helicity moves between the two parts while the sum stays put.

mixed = knot_state(grid, KnotParams(1, 2, 1, 1))
for T in (0.0, 0.5, 1.0):
    h_m, h_e = helicity.helicity_at(mixed, T)
    print(f"(1,2,1,1) T={T}: h_m={h_m:.5f} h_e={h_e:.5f} h={h_m + h_e:.5f}")
