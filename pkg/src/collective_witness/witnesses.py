"""Entanglement-depth bounds on F and the k / zeta / f trade-off algebra."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DegenerateK,
    InfeasibleLevel,
    InvalidK,
    NegativeZeta,
    NonzeroAtZero,
    NotConvex,
    ThicknessHypothesisViolated,
)


def _check_k(n, k):
    if not 1 <= k <= n:
        raise InvalidK(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")


def _check_zeta(zeta):
    if zeta < 0:
        raise NegativeZeta(f"zeta must be >= 0, got {zeta}")


def bound_k(n: int, k: int) -> tuple:
    """Largest ``F`` of a ``k``-separable state: ``(floor form, n k)``."""
    _check_k(n, k)
    q, r = divmod(n, k)
    return q * k * k + r * r, n * k


def _thick_f(x, zeta):
    return x * x / ((1 - zeta) + x * zeta) if x else 0.0


def bound_thick(n: int, zeta: float) -> float:
    """``n^2 / ((1 - zeta) + zeta n)``, the ceiling of ``F`` at thickness ``zeta``."""
    _check_zeta(zeta)
    return n * n / ((1 - zeta) + zeta * n)


def bound_k_thick(n: int, k: int, zeta: float) -> tuple:
    _check_k(n, k)
    _check_zeta(zeta)
    q, r = divmod(n, k)
    return q * _thick_f(k, zeta) + _thick_f(r, zeta), k * n / ((1 - zeta) + k * zeta)


def bound_generic(n: int, k: int, f: Callable | Sequence[float], dense: Sequence[float] | None = None) -> tuple:
    """``(floor(n/k) f(k) + f(n mod k), n f(k) / k)`` for convex ``f`` with ``f(0) = 0``.

    ``f`` is a callable or its samples on ``0, 1, ..., n``. Convexity is
    checked by second differences on the integer grid and, for callables, on
    ``dense`` (default: 16 points per unit step).
    """
    _check_k(n, k)
    if callable(f):
        samples = [f(x) for x in range(n + 1)]
        grid = np.linspace(0, n, 16 * n + 1) if dense is None else np.asarray(dense, dtype=float)
        dense_vals = np.array([f(x) for x in grid], dtype=float)
    else:
        samples = list(f)
        if len(samples) != n + 1:
            raise ValueError(f"need f sampled on 0..{n} ({n + 1} values), got {len(samples)}")
        dense_vals = None
    if abs(samples[0]) > 1e-12:
        raise NonzeroAtZero(f"f(0) = {samples[0]!r}")
    for vals in (np.asarray(samples, dtype=float), dense_vals):
        if vals is not None and vals.size >= 3:
            second = vals[:-2] - 2 * vals[1:-1] + vals[2:]
            if second.min() < -1e-10:
                raise NotConvex(f"second difference {second.min():.3g} < 0")
    q, r = divmod(n, k)
    return q * samples[k] + samples[r], n * samples[k] / k


@dataclass(frozen=True)
class BoundTable:
    n: int
    zeta: float | None
    rows: tuple  # (k, floor, linear, thick_floor, thick_linear)


def bound_table(n: int, zeta: float | None = None) -> BoundTable:
    rows = []
    for k in range(1, n + 1):
        fl, lin = bound_k(n, k)
        tf, tl = bound_k_thick(n, k, zeta) if zeta is not None else (None, None)
        rows.append((k, fl, lin, tf, tl))
    return BoundTable(n, zeta, tuple(rows))


@dataclass(frozen=True)
class WitnessVerdict:
    f_lower_certified: float
    depth_lower_bound: int
    bound_used: str
    zeta_assumed: float | None
    n: int
    source: str = "unspecified"

    def summary(self) -> str:
        if self.depth_lower_bound == 1:
            return f"depth >= 1 (no entanglement witnessed; F >= {self.f_lower_certified:.10g})"
        return (f"depth >= {self.depth_lower_bound} (F >= {self.f_lower_certified:.10g} "
                f"violates the {self.bound_used} bound for k = {self.depth_lower_bound - 1})")


def certify(f_lower: float, n: int, zeta: float | None = None, zeta_hat: float | None = None,
            source: str = "unspecified") -> WitnessVerdict:
    """Entanglement depth certified by a lower bound on ``F``.

    With ``zeta`` the thickness-adjusted bounds are used; these only hold for
    states that satisfy the thickness hypothesis, so a measured ``zeta_hat``
    below ``zeta`` makes this refuse.
    """
    if f_lower < 0:
        raise ValueError("f_lower must be non-negative")
    if zeta is not None:
        _check_zeta(zeta)
        if zeta_hat is not None and not zeta_hat >= zeta - 1e-9:
            raise ThicknessHypothesisViolated(
                f"state thickness {zeta_hat:.6g} is below the assumed zeta = {zeta:.6g}")
    depth = 1
    for k in range(1, n + 1):
        bound = bound_k(n, k)[0] if zeta is None else bound_k_thick(n, k, zeta)[0]
        if f_lower > bound:
            depth = k + 1
    return WitnessVerdict(float(f_lower), depth, "floor" if zeta is None else "thick", zeta, n, source)


def zeta_of_k(n: float, k: float) -> float:
    """Thickness with the same ceiling as unthick ``k``-separable states."""
    if n == 1:
        raise DegenerateK("n = 1 has no orthogonal directions")
    return (n - k) / (k * (n - 1))


def k_of_zeta(n: float, zeta: float) -> float:
    _check_zeta(zeta)
    return n / ((1 - zeta) + n * zeta)


def zeta_for_f(n: float, k: float, f: float) -> float:
    """Thickness at which ``k n / ((1 - zeta) + k zeta) = f``."""
    if k == 1:
        raise DegenerateK("k = 1 leaves zeta undetermined")
    if f <= 0:
        raise InfeasibleLevel("f must be positive")
    if k * n < f * (1 - 1e-12):
        raise InfeasibleLevel(f"k n = {k * n} < f = {f}")
    return max((k * n - f) / (f * (k - 1)), 0.0)


def k_for_f(n: float, zeta: float, f: float) -> float:
    """Block size at which ``k n / ((1 - zeta) + k zeta) = f``."""
    _check_zeta(zeta)
    # relative slack so that round trips landing on the boundary k = n stay feasible
    if f > bound_thick(n, zeta) * (1 + 1e-12):
        raise InfeasibleLevel(f"f = {f} exceeds n^2/((1-zeta)+n zeta) = {bound_thick(n, zeta)}")
    if n - f * zeta == 0:
        raise DegenerateK("f = n at zeta = 1 holds for every k")
    return f * (1 - zeta) / (n - f * zeta)


def tradeoff(n, mode: str, k=None, zeta=None, f=None) -> float:
    if mode == "zeta_of_k":
        return zeta_of_k(n, k)
    if mode == "k_of_zeta":
        return k_of_zeta(n, zeta)
    if mode == "zeta_for_f":
        return zeta_for_f(n, k, f)
    if mode == "k_for_f":
        return k_for_f(n, zeta, f)
    raise ValueError(f"unknown trade-off mode {mode!r}")
