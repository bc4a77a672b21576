"""
States that maximize F
======================

For a pure state ``F = Var(H_coll) / max_i Var(H_i)`` never exceeds ``n**2``.
The maximum is reached exactly by states whose spectral support lies on one
line parallel to ``(1, ..., 1)``. Here we list those lines and check the claim.
"""

import numpy as np

from collective_witness import (
    enumerate_diagonal_lines,
    f_pure,
    ghz_like,
    line_state,
    make_local_observable,
    qubit,
)

# %%
# GHZ states of qubits sit on the main diagonal, so they saturate.
for n in range(2, 7):
    print(f"GHZ n={n}: F = {f_pure(ghz_like(qubit(), n)):.12g}  (n^2 = {n * n})")

# %%
# With an evenly spaced qutrit spectrum there are several long lines.
# Any superposition along one of them saturates, whatever the coefficients.
qutrit = make_local_observable([0, 1, 2])
rng = np.random.default_rng(0)
for line in enumerate_diagonal_lines(qutrit, 2):
    if len(line) < 2:
        continue
    coeffs = rng.standard_normal(len(line)) + 1j * rng.standard_normal(len(line))
    print(f"line {line.points}: F = {f_pure(line_state(line, coeffs)):.12g}")

# %%
# Uneven spacing breaks all lines except the main diagonal.
uneven = make_local_observable([-1, 0, 2])
long_lines = [ln.points for ln in enumerate_diagonal_lines(uneven, 2) if len(ln) >= 2]
print("lines with two or more points for spectrum (-1, 0, 2):", long_lines)
