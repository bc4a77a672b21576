"""
Thickness of a two-party grid state
===================================

Spread perpendicular to the collective direction lowers the ceiling on F to
``n^2 / ((1 - zeta) + zeta n)``. A discretized two-dimensional Gaussian makes
the trade visible: shrinking the perpendicular width pushes F towards 4.
"""

from collective_witness import bound_thick, evenly_spaced, f_pure, gaussian_grid_state, thickness

grid = evenly_spaced(64)
for diff_width in (4.0, 2.0, 1.0, 0.5):
    g = gaussian_grid_state(grid, sum_width=4.0, diff_width=diff_width)
    zeta = thickness(g).zeta_hat
    print(f"diff_width={diff_width}: zeta_hat={zeta:.6f}  F={f_pure(g):.6f}  "
          f"ceiling={bound_thick(2, zeta):.6f}")
