"""Variances, covariances, quantum Fisher information and skew information.

All operators here are diagonal in the product eigenbasis, so first and
second moments only need the diagonal probability vector of the state.
"""
from __future__ import annotations

import numpy as np

from .errors import DegenerateRange, DimensionMismatch
from .observables import CollectiveOperator
from .states import ZERO_TOL, DensityState, PureState, eigensystem

NEG_CLAMP = 1e-12


def _probs(state, *ops) -> np.ndarray:
    for op in ops:
        if state.obs != op.obs or state.n != op.n:
            raise DimensionMismatch("operator and state live on different spaces")
    return state.probabilities()


def expectation(state, op: CollectiveOperator) -> float:
    return float(_probs(state, op) @ op.weights)


def variance(state, op: CollectiveOperator) -> float:
    p = _probs(state, op)
    w = op.weights
    mean = p @ w
    var = float(p @ (w - mean) ** 2)
    if var < -NEG_CLAMP:
        raise ArithmeticError(f"variance {var} is negative beyond rounding")
    return max(var, 0.0)


def covariance(state, op1: CollectiveOperator, op2: CollectiveOperator) -> float:
    p = _probs(state, op1, op2)
    d1 = op1.weights - p @ op1.weights
    d2 = op2.weights - p @ op2.weights
    return float(p @ (d1 * d2))


def _eigen_matrix_elements(rho: DensityState, op: CollectiveOperator, zero_tol: float):
    if rho.obs != op.obs or rho.n != op.n:
        raise DimensionMismatch("operator and state live on different spaces")
    es = eigensystem(rho, zero_tol)
    # rounding-level eigenvalues would survive a square root as ~1e-8
    lam = np.where(es.numerically_zero, 0.0, np.clip(es.eigenvalues, 0.0, None))
    v = es.eigenvectors
    a = v.conj().T @ (op.weights[:, None] * v)
    return lam, np.abs(a) ** 2


def qfi(rho: DensityState, op: CollectiveOperator, zero_tol: float = ZERO_TOL) -> float:
    """``2 sum_{i,j} (l_i - l_j)^2 / (l_i + l_j) |<i|A|j>|^2`` over pairs with ``l_i + l_j > 0``."""
    if isinstance(rho, PureState):
        rho = rho.density()
    lam, a2 = _eigen_matrix_elements(rho, op, zero_tol)
    s = lam[:, None] + lam[None, :]
    keep = s > zero_tol * lam.max()
    d = (lam[:, None] - lam[None, :]) ** 2
    terms = np.where(keep, d / np.where(keep, s, 1.0), 0.0) * a2
    return float(2.0 * terms.sum())


def wy_skew(rho: DensityState, op: CollectiveOperator, zero_tol: float = ZERO_TOL) -> float:
    """Wigner-Yanase skew information ``-1/2 Tr([sqrt(rho), A]^2)``."""
    if isinstance(rho, PureState):
        rho = rho.density()
    lam, a2 = _eigen_matrix_elements(rho, op, zero_tol)
    r = np.sqrt(lam)
    return float(0.5 * np.sum((r[:, None] - r[None, :]) ** 2 * a2))


def popoviciu_bound(m: float, M: float) -> float:
    """``(M - m)^2 / 4``, the largest variance of a variable confined to ``[m, M]``."""
    if not M > m:
        raise DegenerateRange(f"need M > m, got m={m}, M={M}")
    return (M - m) ** 2 / 4.0


def check_popoviciu(weights, values) -> bool:
    p = np.asarray(weights, dtype=float)
    x = np.asarray(values, dtype=float)
    mean = p @ x
    var = p @ (x - mean) ** 2
    m, M = x[p > 0].min(), x[p > 0].max()
    if M == m:
        return bool(var <= 1e-12)
    return bool(var <= popoviciu_bound(m, M) + 1e-12)
