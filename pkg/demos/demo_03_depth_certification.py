"""
Certifying entanglement depth
=============================

A k-separable pure state obeys ``F <= floor(n/k) k^2 + (n mod k)^2``. A
measured F above that bound certifies at least (k+1)-partite entanglement.
"""

import numpy as np

from collective_witness import bound_table, certify, f_pure, ghz_like, qubit, sample_k_separable

n = 6
for k, floor, linear, _, _ in bound_table(n).rows:
    print(f"k={k}: floor bound {floor}, linear bound {linear}")

# %%
# Random k-separable states never cross their bound.
rng = np.random.default_rng(1)
for k in (1, 2, 3):
    worst = max(f_pure(sample_k_separable(qubit(), n, k, rng)[0]) for _ in range(300))
    print(f"k={k}: largest F over 300 samples = {worst:.4f}")

# %%
# A GHZ state is certified fully entangled.
print(certify(f_pure(ghz_like(qubit(), n)), n).summary())
