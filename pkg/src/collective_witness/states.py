"""Pure states, density matrices, ensembles and the state families used throughout."""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    EmptyCoefficients,
    EpsOutOfRange,
    InvalidK,
    InvariantViolation,
    NotHermitian,
    OddN,
)
from .spectral import (
    GRID_CAP,
    DiagonalLine,
    LocalObservable,
    check_grid,
    eigenvalue_grid,
    flat_index,
    qubit,
)

NORM_TOL = 1e-9
HERM_TOL = 1e-10
EIG_TOL = 1e-10
#: Relative threshold under which eigenvalues count as numerically zero.
ZERO_TOL = 1e-12


@contextmanager
def tolerances(norm: float | None = None, eig: float | None = None):
    """Temporarily loosen or tighten the norm/trace and eigenvalue checks."""
    global NORM_TOL, EIG_TOL
    saved = NORM_TOL, EIG_TOL
    NORM_TOL = saved[0] if norm is None else norm
    EIG_TOL = saved[1] if eig is None else eig
    try:
        yield
    finally:
        NORM_TOL, EIG_TOL = saved


@dataclass(frozen=True, eq=False)
class PureState:
    """Dense amplitude vector over ``Lambda^n`` (last party fastest)."""

    obs: LocalObservable
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        size = check_grid(self.obs, self.n, cap=max(GRID_CAP, self.obs.dim ** self.n))
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != size:
            raise InvariantViolation(f"expected {size} amplitudes, got {amps.size}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvariantViolation(f"state not normalized: sum |a|^2 = {norm!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, obs, n, amplitudes, normalize=True) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise InvariantViolation("zero vector cannot be normalized")
            amps = amps / norm
        return cls(obs, n, amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((self.obs.dim,) * self.n)

    def density(self) -> "DensityState":
        a = self.amplitudes
        return DensityState(self.obs, self.n, np.outer(a, a.conj()))

    def kron(self, other: "PureState") -> "PureState":
        """Tensor product, ``self`` on the leading parties."""
        if other.obs != self.obs:
            raise ValueError("tensor product requires a common local observable")
        return PureState(self.obs, self.n + other.n, np.kron(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityState:
    obs: LocalObservable
    n: int
    matrix: np.ndarray

    def __post_init__(self):
        size = check_grid(self.obs, self.n, cap=max(GRID_CAP, self.obs.dim ** self.n))
        mat = np.array(self.matrix, dtype=complex)
        if mat.shape != (size, size):
            raise InvariantViolation(f"expected a {size}x{size} matrix, got {mat.shape}")
        if np.max(np.abs(mat - mat.conj().T)) > HERM_TOL:
            raise NotHermitian("density matrix is not Hermitian")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > NORM_TOL:
            raise InvariantViolation(f"trace is {tr!r}, expected 1")
        if np.linalg.eigvalsh(mat)[0] < -EIG_TOL:
            raise InvariantViolation("density matrix has a negative eigenvalue")
        mat = (mat + mat.conj().T) / 2
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def probabilities(self) -> np.ndarray:
        return np.clip(np.diagonal(self.matrix).real, 0.0, None)

    def mix(self, other: "DensityState", t: float) -> "DensityState":
        """``t * self + (1 - t) * other``."""
        return DensityState(self.obs, self.n, t * self.matrix + (1 - t) * other.matrix)


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Weighted list of pure states, ``rho = sum_i p_i |psi_i><psi_i|``."""

    members: tuple

    def __post_init__(self):
        members = tuple((float(p), s) for p, s in self.members)
        if not members:
            raise InvariantViolation("empty ensemble")
        if any(p <= 0 for p, _ in members):
            raise InvariantViolation("ensemble weights must be positive")
        total = sum(p for p, _ in members)
        if abs(total - 1.0) > NORM_TOL:
            raise InvariantViolation(f"ensemble weights sum to {total!r}")
        obs, n = members[0][1].obs, members[0][1].n
        if any(s.obs != obs or s.n != n for _, s in members):
            raise InvariantViolation("ensemble members must share observable and party count")
        object.__setattr__(self, "members", members)

    @property
    def obs(self) -> LocalObservable:
        return self.members[0][1].obs

    @property
    def n(self) -> int:
        return self.members[0][1].n

    def density(self) -> DensityState:
        mat = sum(p * np.outer(s.amplitudes, s.amplitudes.conj()) for p, s in self.members)
        return DensityState(self.obs, self.n, mat)


@dataclass(frozen=True, eq=False)
class EigenSystem:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # columns
    numerically_zero: np.ndarray = field(repr=False)

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(~self.numerically_zero))

    def support_basis(self) -> np.ndarray:
        return self.eigenvectors[:, ~self.numerically_zero]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eigensystem(rho: DensityState, zero_tol: float = ZERO_TOL) -> EigenSystem:
    mat = rho.matrix
    if np.max(np.abs(mat - mat.conj().T)) > HERM_TOL:
        raise NotHermitian("density matrix is not Hermitian")
    vals, vecs = np.linalg.eigh(mat)
    vals, vecs = vals[::-1], vecs[:, ::-1]
    cutoff = zero_tol * max(vals[0], 0.0)
    return EigenSystem(vals, vecs, vals <= cutoff)


# ----------------------------------------------------------------------------
# state families


def product_eigenstate(obs: LocalObservable, index: Sequence[int]) -> PureState:
    n = len(index)
    amps = np.zeros(obs.dim ** n, dtype=complex)
    amps[flat_index(obs, index)] = 1.0
    return PureState(obs, n, amps)


def ghz_like(obs: LocalObservable, n: int, phase: float = 0.0) -> PureState:
    """``(|min>^n + e^{i phase} |max>^n) / sqrt(2)``."""
    check_grid(obs, n)
    amps = np.zeros(obs.dim ** n, dtype=complex)
    amps[0] = 1 / np.sqrt(2)
    amps[-1] = np.exp(1j * phase) / np.sqrt(2)
    return PureState(obs, n, amps)


def line_state(line: DiagonalLine, coeffs: Sequence[complex]) -> PureState:
    """Normalized state supported on ``line`` with the given relative amplitudes."""
    coeffs = np.asarray(list(coeffs), dtype=complex)
    if coeffs.size != len(line.points):
        raise ValueError(f"line has {len(line.points)} points but {coeffs.size} coefficients given")
    if coeffs.size == 0 or not np.any(coeffs):
        raise EmptyCoefficients("coefficients are all zero")
    obs, n = line.obs, line.n
    amps = np.zeros(obs.dim ** n, dtype=complex)
    for c, p in zip(coeffs, line.points):
        amps[flat_index(obs, p)] = c
    return PureState.from_amplitudes(obs, n, amps)


def haar_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def _composition_counts(n: int, k: int) -> list:
    counts = [1] + [0] * n
    for m in range(1, n + 1):
        counts[m] = sum(counts[m - j] for j in range(1, min(k, m) + 1))
    return counts


def random_composition(n: int, k: int, rng: np.random.Generator) -> tuple:
    """Uniformly random ordered composition of ``n`` with parts at most ``k``."""
    if not 1 <= k <= n:
        raise InvalidK(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")
    counts = _composition_counts(n, k)
    parts = []
    left = n
    while left:
        options = list(range(1, min(k, left) + 1))
        weights = np.array([counts[left - j] for j in options], dtype=float)
        j = options[int(rng.choice(len(options), p=weights / weights.sum()))]
        parts.append(j)
        left -= j
    return tuple(parts)


def sample_k_separable(obs: LocalObservable, n: int, k: int, rng) -> tuple:
    """Draw a ``k``-separable pure state; returns ``(state, parts)``.

    Blocks are contiguous in party order and each block is Haar random.
    """
    rng = np.random.default_rng(rng)
    check_grid(obs, n)
    parts = random_composition(n, k, rng)
    amps = np.ones(1, dtype=complex)
    for size in parts:
        amps = np.kron(amps, haar_vector(obs.dim ** size, rng))
    return PureState.from_amplitudes(obs, n, amps), parts


def sample(kind: str, obs: LocalObservable, n: int, k: int | None = None, seed=None) -> PureState:
    """Seeded random pure state: ``haar``, ``product`` or ``k_separable``."""
    rng = np.random.default_rng(seed)
    if kind == "haar":
        size = check_grid(obs, n)
        return PureState.from_amplitudes(obs, n, haar_vector(size, rng))
    if kind == "product":
        return sample_k_separable(obs, n, 1, rng)[0]
    if kind == "k_separable":
        if k is None:
            raise InvalidK("k_separable sampling needs k")
        return sample_k_separable(obs, n, k, rng)[0]
    raise ValueError(f"unknown sample kind {kind!r}")


def random_density(obs: LocalObservable, n: int, rank: int | None = None, seed=None) -> DensityState:
    """Ginibre-distributed density matrix of the given rank (full rank by default)."""
    rng = np.random.default_rng(seed)
    size = check_grid(obs, n)
    rank = size if rank is None else rank
    g = rng.standard_normal((size, rank)) + 1j * rng.standard_normal((size, rank))
    mat = g @ g.conj().T
    return DensityState(obs, n, mat / np.trace(mat).real)


def _check_eps(eps):
    if not 0.0 <= eps <= 1.0:
        raise EpsOutOfRange(f"eps must lie in [0, 1], got {eps}")


def depolarized_ghz(n: int, eps: float) -> DensityState:
    """``(1 - eps) |GHZ><GHZ| + eps * I / 2**n`` on qubits."""
    _check_eps(eps)
    ghz = ghz_like(qubit(), n).amplitudes
    size = 2 ** n
    mat = (1 - eps) * np.outer(ghz, ghz.conj()) + eps * np.eye(size) / size
    return DensityState(qubit(), n, mat)


def flip_pair_state(bits: Sequence[int], sign: int) -> PureState:
    """``(|s> + sign |s_bar>) / sqrt(2)`` for a bit string ``s`` of Pauli-Z eigenstates.

    Bit 0 is the ``+1`` eigenstate of Z, i.e. grid index 1 of the sorted
    spectrum ``(-1, 1)``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    obs = qubit()
    idx = tuple(1 - int(b) for b in bits)
    flipped = tuple(1 - i for i in idx)
    amps = np.zeros(2 ** len(idx), dtype=complex)
    amps[flat_index(obs, idx)] += 1 / np.sqrt(2)
    amps[flat_index(obs, flipped)] += sign / np.sqrt(2)
    return PureState(obs, len(idx), amps)


def ghz_mix(n: int, eps: float) -> DensityState:
    """``(1 - eps) |GHZ><GHZ| + eps |phi><phi|`` with ``phi`` the GHZ state bit-flipped on the last ``n/2`` qubits."""
    if n % 2:
        raise OddN(f"n must be even, got {n}")
    _check_eps(eps)
    psi = flip_pair_state([0] * n, 1).amplitudes
    phi = flip_pair_state([0] * (n // 2) + [1] * (n // 2), 1).amplitudes
    mat = (1 - eps) * np.outer(psi, psi.conj()) + eps * np.outer(phi, phi.conj())
    return DensityState(qubit(), n, mat)


def gaussian_grid_state(obs: LocalObservable, sum_width: float, diff_width: float) -> PureState:
    """Two-party Gaussian amplitude elongated along the collective direction.

    ``|amplitude|^2`` is a Gaussian with standard deviation ``sum_width`` in
    ``lam_1 + lam_2`` and ``diff_width`` in ``lam_1 - lam_2``, centered on the
    grid mean.
    """
    if sum_width <= 0 or diff_width <= 0:
        raise ValueError("widths must be positive")
    lam = eigenvalue_grid(obs, 2)
    lam = lam - obs.as_array().mean()
    s = lam[0] + lam[1]
    t = lam[0] - lam[1]
    log_amp = -(s ** 2) / (4 * sum_width ** 2) - t ** 2 / (4 * diff_width ** 2)
    amps = np.exp(log_amp - log_amp.max())
    return PureState.from_amplitudes(obs, 2, amps)
