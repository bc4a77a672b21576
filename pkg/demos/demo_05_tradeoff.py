"""
Block size versus thickness
===========================

Unthick k-separable states and fully entangled states of thickness zeta share
the same ceiling on F when ``k = n / ((1 - zeta) + n zeta)``. The CLI writes the
same table as CSV with ``collective-witness sweep k_of_zeta --n 10``.
"""

import numpy as np

from collective_witness import k_of_zeta, zeta_for_f

for n in (5, 10, 50):
    ks = [k_of_zeta(n, z) for z in np.linspace(0, 1, 6)]
    print(f"n={n}: k at zeta = 0, 0.2, ..., 1 ->", ", ".join(f"{k:.3f}" for k in ks))

# %%
# Holding F fixed at f = 15 for ten parties, each block size needs a thickness.
for k in (2, 3, 5, 10):
    print(f"k={k}: zeta = {zeta_for_f(10, k, 15):.6f}")
