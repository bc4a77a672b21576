"""Brute-force cross-checks that take a different route from the main code paths."""
from __future__ import annotations

import itertools
import warnings

import numpy as np
from scipy import optimize

from .errors import BadNormalization, DegenerateRange
from .observables import as_signs
from .quantifiers import ZERO_VARIANCE, OptConfig
from .states import DensityState, eigensystem


def covariance_matrix(state) -> np.ndarray:
    """Full ``n x n`` covariance of the local operators, summed point by point."""
    obs, n = state.obs, state.n
    lam = obs.spectrum
    probs = state.probabilities()
    mean = np.zeros(n)
    second = np.zeros((n, n))
    for j, idx in enumerate(itertools.product(range(obs.dim), repeat=n)):
        p = probs[j]
        if p == 0:
            continue
        x = np.array([lam[i] for i in idx])
        mean += p * x
        second += p * np.outer(x, x)
    return second - np.outer(mean, mean)


def f_via_covariance(state, signs=None) -> float:
    """``sum_ij c_i c_j Cov_ij / max_i Cov_ii`` with the zero-variance convention."""
    c = np.asarray(as_signs(signs, state.n).signs, dtype=float)
    cov = covariance_matrix(state)
    denom = np.max(np.diag(cov))
    if denom < ZERO_VARIANCE:
        return 0.0
    return float(c @ cov @ c / denom)


def _ratio_terms(p, lam, coeffs):
    mean = lam @ p
    local = (lam ** 2) @ p - mean ** 2
    coll_w = coeffs @ lam
    coll = (coll_w ** 2) @ p - (coll_w @ p) ** 2
    return coll, local


def maximize_ratio(obs, n: int, coeffs, cfg: OptConfig | None = None) -> float:
    """Best ``Var(sum_i c_i H_i) / max_i Var(H_i)`` found over pure states.

    Diagonal operators only see ``|amplitude|^2``, so the search runs over
    probability vectors: maximize ``Var(coll) / s`` subject to
    ``Var(H_i) <= s``. Report-only; the value is a lower estimate of the sup.
    """
    cfg = cfg or OptConfig()
    coeffs = np.asarray(coeffs, dtype=float)
    if len(coeffs) != n or abs(coeffs @ coeffs - n) > 1e-12:
        raise BadNormalization(f"need sum c_i^2 = n = {n}, got {coeffs @ coeffs!r}")
    lam = np.array([[obs.spectrum[i] for i in idx]
                    for idx in itertools.product(range(obs.dim), repeat=n)]).T
    size = lam.shape[1]
    rng = np.random.default_rng(cfg.seed)

    def unpack(z):
        x = z[:size]
        return x ** 2 / (x @ x), z[size]

    def neg_obj(z):
        p, s = unpack(z)
        coll, _ = _ratio_terms(p, lam, coeffs)
        return -coll / s

    def cons(z):
        p, s = unpack(z)
        _, local = _ratio_terms(p, lam, coeffs)
        return s - local

    best = 0.0
    for _ in range(cfg.restarts or 64):
        x0 = rng.random(size) + 1e-3
        p0 = x0 ** 2 / (x0 @ x0)
        s0 = max(_ratio_terms(p0, lam, coeffs)[1].max(), 1e-6)
        with warnings.catch_warnings():
            # SLSQP steps slightly past the slack bound on its way to convergence
            warnings.simplefilter("ignore", RuntimeWarning)
            res = optimize.minimize(neg_obj, np.append(x0, s0), method="SLSQP",
                                    constraints=[{"type": "ineq", "fun": cons}],
                                    bounds=[(None, None)] * size + [(1e-9, None)],
                                    options={"ftol": 1e-15, "maxiter": 500})
        p, _ = unpack(res.x)
        coll, local = _ratio_terms(p, lam, coeffs)
        if local.max() > ZERO_VARIANCE:
            best = max(best, float(coll / local.max()))
    return best


def popoviciu_sampler(m: float, M: float, trials: int = 10_000, seed=0, grid_points: int = 16) -> float:
    """Largest variance over random distributions on a uniform grid of ``[m, M]``."""
    if not M > m:
        raise DegenerateRange(f"need M > m, got m={m}, M={M}")
    rng = np.random.default_rng(seed)
    x = np.linspace(m, M, grid_points)
    alphas = rng.choice([0.05, 0.3, 1.0, 5.0], size=trials)
    p = np.stack([rng.dirichlet(np.full(grid_points, a)) for a in alphas])
    mean = p @ x
    var = p @ x ** 2 - mean ** 2
    return float(var.max())


def two_point_variance(m: float, M: float) -> float:
    """Variance of the half-half distribution on ``{m, M}``; equals the Popoviciu bound."""
    p = np.array([0.5, 0.5])
    x = np.array([m, M], dtype=float)
    mean = p @ x
    return float(p @ (x - mean) ** 2)


def convex_roof_grid_scan(rho: DensityState, signs=None, points: int = 256, zero_tol: float = 1e-12) -> float:
    """Minimum of ``sum_i p_i F(psi_i)`` over two-member decompositions of a rank-2 state.

    A 2x2 unitary acting on the weighted eigenvectors is, up to phases of its
    rows, a rotation angle and a relative phase; both are scanned on a
    ``points x points`` grid.
    """
    es = eigensystem(rho, zero_tol)
    if es.rank != 2:
        raise ValueError(f"grid scan needs a rank-2 state, got rank {es.rank}")
    c = np.asarray(as_signs(signs, rho.n).signs, dtype=float)
    lam = np.array([[rho.obs.spectrum[i] for i in idx]
                    for idx in itertools.product(range(rho.obs.dim), repeat=rho.n)]).T
    e0 = es.eigenvectors[:, 0] * np.sqrt(es.eigenvalues[0])
    e1 = es.eigenvectors[:, 1] * np.sqrt(es.eigenvalues[1])
    best = np.inf
    phis = np.linspace(0, 2 * np.pi, points, endpoint=False)
    for theta in np.linspace(0, np.pi / 2, points):
        ct, st = np.cos(theta), np.sin(theta)
        total = np.zeros(points)
        for rows in ((ct * e0[None, :] + st * np.exp(1j * phis)[:, None] * e1[None, :]),
                     (-st * np.exp(-1j * phis)[:, None] * e0[None, :] + ct * e1[None, :])):
            q = np.abs(rows) ** 2
            w = q.sum(axis=1)
            safe = np.where(w < 1e-15, 1.0, w)
            p = q / safe[:, None]
            mean = p @ lam.T
            second = np.einsum("bj,ij,kj->bik", p, lam, lam)
            cov = second - mean[:, :, None] * mean[:, None, :]
            coll = np.einsum("i,bik,k->b", c, cov, c)
            local = np.einsum("bii->bi", cov).max(axis=1)
            f = np.where(local < ZERO_VARIANCE, 0.0, coll / np.where(local < ZERO_VARIANCE, 1.0, local))
            total += np.where(w < 1e-15, 0.0, w * f)
        best = min(best, float(total.min()))
    return best
