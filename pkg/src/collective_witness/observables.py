"""Diagonal collective operators stored as weight tables over ``Lambda^n``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch
from .spectral import GRID_CAP, LocalObservable, eigenvalue_grid


@dataclass(frozen=True)
class SignVector:
    """Coefficients ``c_i = +-1`` of a collective operator."""

    signs: tuple

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if not signs or any(s not in (1, -1) for s in signs):
            raise ValueError(f"signs must be a non-empty sequence of +1/-1, got {self.signs!r}")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def ones(cls, n: int) -> "SignVector":
        return cls((1,) * n)

    def __len__(self):
        return len(self.signs)


def as_signs(signs, n: int) -> SignVector:
    if signs is None:
        return SignVector.ones(n)
    if not isinstance(signs, SignVector):
        signs = SignVector(tuple(signs))
    if len(signs) != n:
        raise DimensionMismatch(f"{len(signs)} signs for {n} parties")
    return signs


@dataclass(frozen=True, eq=False)
class CollectiveOperator:
    """``sum_i coeffs[i] * H_i``, diagonal in the product eigenbasis."""

    obs: LocalObservable
    n: int
    coeffs: tuple
    weights: np.ndarray

    @property
    def dim(self) -> int:
        return self.weights.size


def collective_operator(obs: LocalObservable, n: int, coeffs: Sequence[float],
                        cap: int = GRID_CAP) -> CollectiveOperator:
    coeffs = tuple(float(c) for c in coeffs)
    if len(coeffs) != n:
        raise DimensionMismatch(f"{len(coeffs)} coefficients for {n} parties")
    weights = np.asarray(coeffs) @ eigenvalue_grid(obs, n, cap)
    weights.setflags(write=False)
    return CollectiveOperator(obs, n, coeffs, weights)


def local_operator(obs: LocalObservable, n: int, party: int) -> CollectiveOperator:
    """``H`` acting on ``party`` (0-based)."""
    coeffs = np.zeros(n)
    coeffs[party] = 1.0
    return collective_operator(obs, n, coeffs)


def local_operators(obs: LocalObservable, n: int) -> list:
    return [local_operator(obs, n, i) for i in range(n)]


def h_coll(obs: LocalObservable, n: int, signs=None) -> CollectiveOperator:
    return collective_operator(obs, n, as_signs(signs, n).signs)


@dataclass(frozen=True, eq=False)
class OrthoFrame:
    """Orthogonal ``n x n`` matrix whose first row is uniform."""

    rows: np.ndarray

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    def operators(self, obs: LocalObservable) -> list:
        """The operators ``P_j = sum_k rows[j, k] H_k``."""
        return [collective_operator(obs, self.n, row) for row in self.rows]


def helmert_frame(n: int) -> OrthoFrame:
    """Helmert basis: row ``j >= 2`` is ``(1, ..., 1, -(j-1), 0, ..., 0) / sqrt(j (j-1))``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rows = np.zeros((n, n))
    rows[0] = 1 / np.sqrt(n)
    for j in range(2, n + 1):
        rows[j - 1, : j - 1] = 1.0
        rows[j - 1, j - 1] = -(j - 1)
        rows[j - 1] /= np.sqrt(j * (j - 1))
    rows.setflags(write=False)
    return OrthoFrame(rows)


def _check_compatible(op, *states):
    for s in states:
        if s.obs != op.obs or s.n != op.n:
            raise DimensionMismatch("operator and state live on different spaces")


def matrix_element(op: CollectiveOperator, bra, ket) -> complex:
    """``<bra| op |ket>``."""
    _check_compatible(op, bra, ket)
    return complex(np.sum(op.weights * bra.amplitudes.conj() * ket.amplitudes))
