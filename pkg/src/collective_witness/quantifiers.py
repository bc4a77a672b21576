"""The quantifier F and its mixed-state extensions.

For pure states ``F = Var(H_coll) / max_i Var(H_i)`` with the convention
``F = 0`` when every local variance vanishes. Mixed states get three
extensions, ordered ``F_R <= F_S <= F_CR``:

* ``f_r``: QFI of ``H_coll`` over the worst-case local variance. Exact.
* ``f_s_estimate``: QFI over the largest local variance found in the support.
* ``f_cr_estimate``: convex roof of ``F``, searched over ensemble decompositions.

The last two are optimization problems approached from the wrong side by
any finite search, so they return a :class:`QuantBracket` whose ``lower``
field is always certified.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize
from scipy.stats import unitary_group

from .errors import NonpositiveA, RankZero
from .moments import qfi, variance
from .observables import OrthoFrame, as_signs, h_coll, helmert_frame
from .spectral import eigenvalue_grid
from .states import ZERO_TOL, DensityState, PureState, eigensystem

logger = logging.getLogger(__name__)

#: Local variances below this make ``F`` zero by convention.
ZERO_VARIANCE = 1e-12


@dataclass
class OptConfig:
    """Knobs shared by the support and convex-roof searches."""

    restarts: int | None = None
    tol: float = 1e-10
    seed: int = 0
    threads: int = 1
    ensemble_size: int | None = None
    max_sweeps: int = 50
    zero_tol: float = ZERO_TOL
    certify_gap: float = 1e-6


@dataclass(frozen=True)
class QuantBracket:
    lower: float
    upper: float
    estimate: float
    method: str
    certified_exact: bool
    details: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.lower <= self.estimate + 1e-9 or not self.estimate <= self.upper + 1e-9:
            raise ArithmeticError(f"inconsistent bracket {self.lower}, {self.estimate}, {self.upper}")

    @property
    def certified_lower(self) -> float:
        return self.estimate if self.certified_exact else self.lower


# ----------------------------------------------------------------------------
# pure states


def f_from_probs(probs: np.ndarray, obs, n: int, signs=None) -> np.ndarray:
    """``F`` of the distribution(s) ``probs`` over ``Lambda^n``; last axis is the grid."""
    signs = np.asarray(as_signs(signs, n).signs, dtype=float)
    lam = eigenvalue_grid(obs, n)  # (n, N)
    p = np.asarray(probs, dtype=float)
    means = p @ lam.T  # (..., n)
    centered = lam - means[..., :, None]  # (..., n, N)
    local = np.einsum("...j,...ij->...i", p, centered ** 2)
    coll = np.einsum("...j,...j->...", p, (signs @ centered) ** 2)
    denom = local.max(axis=-1)
    safe = np.where(denom < ZERO_VARIANCE, 1.0, denom)
    return np.where(denom < ZERO_VARIANCE, 0.0, coll / safe)


def f_pure(state: PureState, signs=None) -> float:
    """``Var(H_coll) / max_i Var(H_i)``; zero when all local variances vanish."""
    return float(f_from_probs(state.probabilities(), state.obs, state.n, signs))


# ----------------------------------------------------------------------------
# thickness


@dataclass(frozen=True)
class ThicknessReport:
    delta_p1: float
    delta_pj_min: float
    zeta_hat: float  # nan when undefined
    frame: OrthoFrame = field(repr=False)

    @property
    def defined(self) -> bool:
        return not np.isnan(self.zeta_hat)


def thickness(state, frame: OrthoFrame | None = None) -> ThicknessReport:
    """Smallest ratio ``Var(P_j) / Var(P_1)`` over ``j >= 2`` in the given frame."""
    frame = helmert_frame(state.n) if frame is None else frame
    variances = [variance(state, op) for op in frame.operators(state.obs)]
    d1 = variances[0]
    dmin = min(variances[1:]) if len(variances) > 1 else float("nan")
    if d1 < ZERO_VARIANCE or len(variances) == 1:
        zeta = float("nan")
    else:
        zeta = dmin / d1
    return ThicknessReport(d1, dmin, zeta, frame)


# ----------------------------------------------------------------------------
# mixed states


def _as_density(rho) -> DensityState:
    return rho.density() if isinstance(rho, PureState) else rho


def f_r(rho, signs=None, A: float | None = None, zero_tol: float = ZERO_TOL) -> QuantBracket:
    """``Q(H_coll) / (4 A)`` with ``A`` the Popoviciu ceiling by default."""
    rho = _as_density(rho)
    A = rho.obs.popoviciu_ceiling if A is None else float(A)
    if A <= 0:
        raise NonpositiveA(f"A must be positive, got {A}")
    value = qfi(rho, h_coll(rho.obs, rho.n, signs), zero_tol) / (4 * A)
    return QuantBracket(value, value, value, "F_R", True)


def _local_variance_sup(basis: np.ndarray, h: np.ndarray, ceiling: float,
                        restarts: int, rng: np.random.Generator, tol: float) -> float:
    """Maximize ``Var_psi(diag(h))`` over unit ``psi`` in the span of ``basis`` columns."""
    r = basis.shape[1]
    m1 = basis.conj().T @ (h[:, None] * basis)
    m2 = basis.conj().T @ ((h ** 2)[:, None] * basis)

    def value_grad(x):
        y = x[:r] + 1j * x[r:]
        s = np.vdot(y, y).real
        a = np.vdot(y, m2 @ y).real
        b = np.vdot(y, m1 @ y).real
        val = a / s - (b / s) ** 2
        g = (2 * m2 @ y * s - 2 * a * y) / s ** 2 - 2 * (b / s) * (2 * m1 @ y * s - 2 * b * y) / s ** 2
        return -val, -np.concatenate([g.real, g.imag])

    best = 0.0
    starts = [np.eye(r, dtype=complex)[k] for k in range(min(r, restarts))]
    while len(starts) < restarts:
        starts.append(rng.standard_normal(r) + 1j * rng.standard_normal(r))
    for y0 in starts:
        x0 = np.concatenate([y0.real, y0.imag])
        res = optimize.minimize(value_grad, x0, jac=True, method="L-BFGS-B",
                                options={"ftol": tol * 1e-2, "gtol": 1e-12})
        best = max(best, -float(res.fun), -float(value_grad(x0)[0]))
        if best >= ceiling - 1e-9:
            break
    return best


def f_s_estimate(rho, signs=None, cfg: OptConfig | None = None) -> QuantBracket:
    """Support-based extension; the denominator is a supremum over the support of ``rho``."""
    cfg = cfg or OptConfig()
    rho = _as_density(rho)
    es = eigensystem(rho, cfg.zero_tol)
    if es.rank == 0:
        raise RankZero("density matrix has rank zero")
    basis = es.support_basis()
    lower = f_r(rho, signs, zero_tol=cfg.zero_tol).estimate
    q = qfi(rho, h_coll(rho.obs, rho.n, signs), cfg.zero_tol)
    ceiling = rho.obs.popoviciu_ceiling
    lam = eigenvalue_grid(rho.obs, rho.n)
    rng = np.random.default_rng(cfg.seed)
    restarts = cfg.restarts or 32

    if basis.shape[1] == 1:
        p = np.abs(basis[:, 0]) ** 2
        sup = max(float(p @ (h - p @ h) ** 2) for h in lam)
        exact = True
    else:
        sup, exact = 0.0, False
        for h in lam:
            sup = max(sup, _local_variance_sup(basis, h, ceiling, restarts, rng, cfg.tol))
            if sup >= ceiling - 1e-9:
                sup, exact = ceiling, True
                break
    estimate = 0.0 if sup < ZERO_VARIANCE else q / (4 * sup)
    # a search can only under-estimate the supremum, inflating the ratio
    return QuantBracket(min(lower, estimate), estimate, estimate, "F_S_est", exact,
                        {"sup_local_variance": sup, "rank": basis.shape[1]})


# ----------------------------------------------------------------------------
# convex roof


def ensemble_cost(rows: np.ndarray, obs, n: int, signs=None) -> np.ndarray:
    """``p_i F(psi_i)`` for unnormalized members ``sqrt(p_i) psi_i`` (one per row)."""
    return _RoofObjective(obs, n, signs)(rows)


class _RoofObjective:
    """Raw-moment evaluator of ``p F(psi)`` for batches of unnormalized rows."""

    def __init__(self, obs, n, signs):
        lam = eigenvalue_grid(obs, n)
        cw = np.asarray(as_signs(signs, n).signs, dtype=float) @ lam
        first = np.vstack([lam, cw[None, :]]).T  # (N, n+1)
        self.k = n + 1
        self.moments = np.hstack([np.ones((first.shape[0], 1)), first, first ** 2])

    def __call__(self, rows):
        q = rows.real ** 2 + rows.imag ** 2
        mom = q @ self.moments
        w = mom[..., 0]
        safe = np.where(w < 1e-15, 1.0, w)[..., None]
        m1 = mom[..., 1:1 + self.k] / safe
        var = mom[..., 1 + self.k:] / safe - m1 * m1
        local = var[..., :-1].max(axis=-1)
        ok = (local >= ZERO_VARIANCE) & (w >= 1e-15)
        f = np.where(ok, var[..., -1] / np.where(ok, local, 1.0), 0.0)
        return w * np.maximum(f, 0.0)


def _givens(a, b, theta, phi):
    c = np.cos(theta)[..., None]
    s = np.sin(theta)[..., None]
    e = np.exp(1j * phi)[..., None]
    return c * a + s * e * b, -s * np.conj(e) * a + c * b


_THETAS, _PHIS = np.meshgrid(np.linspace(0, np.pi, 12, endpoint=False),
                             np.linspace(0, 2 * np.pi, 8, endpoint=False), indexing="ij")
_THETAS, _PHIS = _THETAS.ravel(), _PHIS.ravel()


def _descend(rows: np.ndarray, cost, cfg: OptConfig) -> float:
    """Coordinate descent over pairwise Givens rotations of the decomposition rows."""
    rows = rows.copy()
    m = rows.shape[0]
    costs = cost(rows)
    total = costs.sum()
    for _ in range(cfg.max_sweeps):
        prev = total
        for a in range(m):
            for b in range(a + 1, m):
                ra, rb = rows[a], rows[b]
                base = costs[a] + costs[b]
                na, nb = _givens(ra, rb, _THETAS, _PHIS)
                trial = cost(na) + cost(nb)
                k = int(np.argmin(trial))

                def pair_cost(x):
                    return float(cost(np.stack(_givens(ra, rb, x[0], x[1]))).sum())

                res = optimize.minimize(pair_cost, [_THETAS[k], _PHIS[k]], method="Nelder-Mead",
                                        options={"xatol": 1e-9, "fatol": 1e-14, "maxiter": 40})
                x, val = (res.x, res.fun) if res.fun <= trial[k] else ((_THETAS[k], _PHIS[k]), trial[k])
                if val < base:
                    rows[a], rows[b] = _givens(ra, rb, np.float64(x[0]), np.float64(x[1]))
                    costs[a], costs[b] = cost(rows[[a, b]])
        total = costs.sum()
        if prev - total <= cfg.tol * max(abs(prev), 1e-300):
            break
    return float(total)


def decomposition_rows(es, isometry: np.ndarray) -> np.ndarray:
    """Unnormalized ensemble members ``sqrt(p_i) psi_i`` produced by an ``m x r`` isometry."""
    r = isometry.shape[1]
    w = es.eigenvectors[:, :r] * np.sqrt(np.clip(es.eigenvalues[:r], 0, None))
    return isometry @ w.T


def f_cr_estimate(rho, signs=None, cfg: OptConfig | None = None) -> QuantBracket:
    """Upper estimate of the convex roof of ``F`` from seeded decomposition searches.

    Every decomposition of ``rho`` is ``sqrt(p_i) psi_i = sum_k U_ik sqrt(l_k) e_k``
    for an isometry ``U``. Restarts draw ``U`` from the Haar measure and then
    descend with pairwise complex Givens rotations. The search stops early
    once the estimate is within ``cfg.certify_gap`` of the certified lower
    bound ``F_R``.
    """
    cfg = cfg or OptConfig()
    rho = _as_density(rho)
    es = eigensystem(rho, cfg.zero_tol)
    r = es.rank
    if r == 0:
        raise RankZero("density matrix has rank zero")
    if r == 1:
        val = float(f_from_probs(np.abs(es.eigenvectors[:, 0]) ** 2, rho.obs, rho.n, signs))
        return QuantBracket(val, val, val, "F_CR_est", True, {"rank": 1})

    lower = f_r(rho, signs, zero_tol=cfg.zero_tol).estimate
    m = min(cfg.ensemble_size or 2 * r, r * r)
    m = max(m, r)
    # each descent costs roughly m^2 pair sweeps, so the default budget shrinks with rank
    restarts = cfg.restarts or (64 if r <= 2 else 8)
    seeds = np.random.SeedSequence(cfg.seed).spawn(restarts)
    cost = _RoofObjective(rho.obs, rho.n, signs)

    def run(i):
        if i == 0:
            iso = np.eye(m, r, dtype=complex)  # the eigen-ensemble itself
        else:
            iso = unitary_group.rvs(m, random_state=np.random.default_rng(seeds[i]))[:, :r]
        return _descend(decomposition_rows(es, iso), cost, cfg)

    results = []
    best = np.inf
    chunk = max(1, cfg.threads)
    with ThreadPoolExecutor(max_workers=chunk) as pool:
        for start in range(0, restarts, chunk):
            batch = list(pool.map(run, range(start, min(start + chunk, restarts))))
            stop = False
            for val in batch:
                results.append(val)
                best = min(best, val)
                if best - lower < cfg.certify_gap:
                    stop = True
                    break
            if stop:
                break
    logger.debug("convex roof: %d restarts, best %.12g, lower %.12g", len(results), best, lower)
    best = max(best, lower)
    return QuantBracket(lower, best, best, "F_CR_est", best - lower < cfg.certify_gap,
                        {"restarts_run": len(results), "ensemble_size": m, "rank": r})
