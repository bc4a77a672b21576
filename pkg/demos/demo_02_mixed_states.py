"""
Mixed-state extensions
======================

Three extensions of F to density matrices are ordered ``F_R <= F_S <= F_CR``.
``F_R`` is exact. ``F_S`` needs a supremum over the support and ``F_CR`` an
infimum over decompositions, so both come back as brackets.
"""

from collective_witness import OptConfig, depolarized_ghz, f_cr_estimate, f_r, f_s_estimate, ghz_mix

# %%
# GHZ with white noise: the support is the whole space, the local-variance
# ceiling is reached there and F_S collapses onto F_R.
for eps in (0.0, 0.2, 0.5):
    rho = depolarized_ghz(3, eps)
    closed = (1 - eps) ** 2 / ((1 - eps) + eps / 4) * 9
    s = f_s_estimate(rho)
    print(f"eps={eps}: F_R={f_r(rho).estimate:.10f}  F_S={s.estimate:.10f} "
          f"(exact={s.certified_exact})  closed form={closed:.10f}")

# %%
# A rank-2 mixture of two GHZ-type states. Each member saturates, so the
# convex roof equals (1 - eps) n^2 and the search certifies it.
for n, eps in ((2, 0.25), (4, 0.5)):
    c = f_cr_estimate(ghz_mix(n, eps))
    print(f"ghz_mix n={n} eps={eps}: F_CR in [{c.lower:.10f}, {c.upper:.10f}], "
          f"restarts used {c.details['restarts_run']}")

# %%
# Without a certificate the convex roof is only an upper estimate.
c = f_cr_estimate(depolarized_ghz(2, 0.5), cfg=OptConfig(restarts=4))
print(f"depolarized n=2 eps=0.5: F_CR bracket [{c.lower:.6f}, {c.upper:.6f}]")
