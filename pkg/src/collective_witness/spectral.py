"""Spectral-space geometry.

A local observable with non-degenerate spectrum ``Lambda`` turns the
``n``-partite Hilbert space into amplitude functions over the grid
``Lambda^n``. Grid points are addressed by multi-indices in lexicographic
order with the last party varying fastest, which is exactly NumPy's C order
for an array of shape ``(d,) * n``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DuplicateEigenvalue, GridTooLarge, TooFewEigenvalues

#: Default cap on ``d**n`` for dense representations.
GRID_CAP = 4096

#: Relative tolerance used to compare eigenvalues and eigenvalue gaps.
REL_TOL = 1e-12


@dataclass(frozen=True)
class LocalObservable:
    """Non-degenerate local spectrum, sorted ascending."""

    spectrum: tuple

    def __post_init__(self):
        spec = tuple(float(x) for x in self.spectrum)
        if len(spec) < 2:
            raise TooFewEigenvalues(f"need at least 2 eigenvalues, got {len(spec)}")
        if any(b <= a for a, b in zip(spec, spec[1:])):
            raise ValueError("spectrum must be strictly increasing; use make_local_observable")
        object.__setattr__(self, "spectrum", spec)

    @property
    def dim(self) -> int:
        return len(self.spectrum)

    @property
    def lam_min(self) -> float:
        return self.spectrum[0]

    @property
    def lam_max(self) -> float:
        return self.spectrum[-1]

    @property
    def scale(self) -> float:
        return max(abs(self.lam_min), abs(self.lam_max), self.lam_max - self.lam_min)

    @property
    def popoviciu_ceiling(self) -> float:
        """Largest possible single-party variance, ``(lam_max - lam_min)**2 / 4``."""
        return (self.lam_max - self.lam_min) ** 2 / 4.0

    def as_array(self) -> np.ndarray:
        return np.asarray(self.spectrum, dtype=float)


def make_local_observable(eigenvalues: Sequence[float]) -> LocalObservable:
    """Sort ``eigenvalues`` and reject degeneracies."""
    vals = np.asarray(list(eigenvalues), dtype=float)
    if vals.ndim != 1 or vals.size < 2:
        raise TooFewEigenvalues(f"need at least 2 eigenvalues, got {vals.size}")
    if not np.all(np.isfinite(vals)):
        raise ValueError("eigenvalues must be finite")
    vals = np.sort(vals)
    scale = max(np.max(np.abs(vals)), 1e-300)
    gaps = np.diff(vals)
    if np.any(gaps <= REL_TOL * scale):
        i = int(np.argmin(gaps))
        raise DuplicateEigenvalue(f"eigenvalues {vals[i]!r} and {vals[i + 1]!r} coincide")
    return LocalObservable(tuple(vals.tolist()))


def qubit() -> LocalObservable:
    """The Pauli-Z spectrum ``(-1, 1)``."""
    return make_local_observable([1.0, -1.0])


def evenly_spaced(points: int, spacing: float = 1.0, center: float = 0.0) -> LocalObservable:
    """Uniform grid used to discretize a continuous spectrum."""
    if points < 2:
        raise TooFewEigenvalues("need at least 2 grid points")
    offsets = (np.arange(points) - (points - 1) / 2.0) * spacing
    return make_local_observable(center + offsets)


def check_grid(obs: LocalObservable, n: int, cap: int = GRID_CAP) -> int:
    if n < 1:
        raise ValueError("party count n must be >= 1")
    size = obs.dim ** n
    if size > cap:
        raise GridTooLarge(f"d**n = {obs.dim}**{n} = {size} exceeds cap {cap}")
    return size


@lru_cache(maxsize=64)
def _index_grid(d: int, n: int) -> np.ndarray:
    grid = np.indices((d,) * n).reshape(n, -1)
    grid.setflags(write=False)
    return grid


def index_grid(obs: LocalObservable, n: int, cap: int = GRID_CAP) -> np.ndarray:
    """Array of shape ``(n, d**n)``; column ``j`` is the multi-index of grid point ``j``."""
    check_grid(obs, n, cap)
    return _index_grid(obs.dim, n)


def eigenvalue_grid(obs: LocalObservable, n: int, cap: int = GRID_CAP) -> np.ndarray:
    """Array of shape ``(n, d**n)`` holding ``lambda_i`` of every grid point."""
    return obs.as_array()[index_grid(obs, n, cap)]


def flat_index(obs: LocalObservable, index: Sequence[int]) -> int:
    return int(np.ravel_multi_index(tuple(index), (obs.dim,) * len(index)))


@dataclass(frozen=True)
class DiagonalLine:
    """Maximal set of grid points whose eigenvalue tuples differ by multiples of ``(1, ..., 1)``."""

    obs: LocalObservable
    offset_key: tuple
    points: tuple

    @property
    def n(self) -> int:
        return len(self.points[0])

    def __len__(self):
        return len(self.points)

    def eigenvalues(self) -> np.ndarray:
        lam = self.obs.as_array()
        return np.array([[lam[i] for i in p] for p in self.points])


def enumerate_diagonal_lines(obs: LocalObservable, n: int, cap: int = GRID_CAP) -> list:
    """Partition ``Lambda^n`` into lines directed by ``(1, ..., 1)``.

    Points are grouped by the offset key ``(lam_2 - lam_1, ..., lam_n - lam_1)``
    with relative tolerance ``REL_TOL``. Lines are sorted by size (descending)
    and then by key; the points of a line are sorted by ``lam_1``.
    """
    idx = index_grid(obs, n, cap)
    lam = eigenvalue_grid(obs, n, cap)
    keys = (lam[1:] - lam[0]).T  # (d**n, n-1)
    atol = REL_TOL * obs.scale
    reps = []  # list of representative keys
    members = []
    for j in range(idx.shape[1]):
        key = keys[j]
        found = -1
        if reps:
            diff = np.max(np.abs(np.asarray(reps) - key), axis=1) if n > 1 else np.zeros(len(reps))
            hits = np.nonzero(diff <= atol)[0]
            if hits.size:
                found = int(hits[0])
        if found < 0:
            reps.append(key)
            members.append([j])
        else:
            members[found].append(j)
    if n == 1:
        # a single coordinate has no offsets; every point is its own line
        members = [[j] for j in range(idx.shape[1])]
        reps = [np.zeros(0) for _ in members]
    lines = []
    for key, mem in zip(reps, members):
        mem = sorted(mem, key=lambda j: lam[0, j])
        pts = tuple(tuple(int(v) for v in idx[:, j]) for j in mem)
        lines.append(DiagonalLine(obs, tuple(float(x) for x in key), pts))
    lines.sort(key=lambda ln: (-len(ln.points), ln.offset_key, ln.points))
    return lines


@dataclass(frozen=True)
class SpectralSupport:
    points: frozenset
    threshold: float
    outside_mass: float

    def __len__(self):
        return len(self.points)


def spectral_support(state, threshold: float = 1e-12) -> SpectralSupport:
    """Grid points carrying probability above ``threshold``.

    For a density matrix this is the support of its diagonal.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    probs = state.probabilities()
    keep = probs > threshold
    idx = index_grid(state.obs, state.n)
    pts = frozenset(tuple(int(v) for v in idx[:, j]) for j in np.nonzero(keep)[0])
    return SpectralSupport(pts, threshold, float(probs[~keep].sum()))
