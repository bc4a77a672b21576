import numpy as np
import pytest
from hypothesis import given, strategies as st

from collective_witness.errors import NonpositiveA, RankZero
from collective_witness.quantifiers import (
    OptConfig,
    QuantBracket,
    f_cr_estimate,
    f_pure,
    f_r,
    f_s_estimate,
    thickness,
)
from collective_witness.spectral import enumerate_diagonal_lines, evenly_spaced, make_local_observable, qubit
from collective_witness.states import (
    DensityState,
    PureState,
    depolarized_ghz,
    gaussian_grid_state,
    ghz_like,
    ghz_mix,
    line_state,
    product_eigenstate,
    random_density,
    sample,
)
from collective_witness.witnesses import bound_thick

PLUS = np.array([1, 1]) / np.sqrt(2)
PLUS2 = PureState(qubit(), 2, np.kron(PLUS, PLUS))
MIXED = DensityState(qubit(), 2, np.eye(4) / 4)


def test_f_pure_examples():
    assert f_pure(ghz_like(qubit(), 3)) == pytest.approx(9)
    assert f_pure(PLUS2) == pytest.approx(2)
    assert f_pure(product_eigenstate(qubit(), (0, 1, 1))) == 0.0


def test_f_pure_frozen_haar():
    # values from an explicit dense-matrix computation on the same seeded amplitudes
    assert f_pure(sample("haar", qubit(), 2, seed=0)) == pytest.approx(1.5043051543862158, abs=1e-12)
    assert f_pure(sample("haar", qubit(), 3, seed=0)) == pytest.approx(2.208464431920933, abs=1e-12)
    assert f_pure(sample("haar", qubit(), 4, seed=11)) == pytest.approx(2.1407570129804543, abs=1e-12)


@given(st.integers(0, 2 ** 31), st.integers(1, 4))
def test_pure_bound(seed, n):
    obs = make_local_observable([-1, 0, 2])
    f = f_pure(sample("haar", obs, n, seed=seed))
    assert f <= n * n + 1e-9
    if n == 1:
        assert f == pytest.approx(1)


@given(st.integers(0, 2 ** 31))
def test_subadditivity(seed):
    rng = np.random.default_rng(seed)
    a = sample("haar", qubit(), 2, seed=int(rng.integers(1 << 30)))
    b = sample("haar", qubit(), 2, seed=int(rng.integers(1 << 30)))
    assert f_pure(a.kron(b)) <= f_pure(a) + f_pure(b) + 1e-9


@pytest.mark.parametrize("eigs,n", [([-1, 1], 3), ([0, 1, 2], 2), ([0, 1, 2], 3), ([-1, 0, 2], 2)])
def test_lines_saturate(eigs, n):
    rng = np.random.default_rng(n)
    for line in enumerate_diagonal_lines(make_local_observable(eigs), n):
        if len(line) >= 2:
            coeffs = rng.standard_normal(len(line)) + 1j * rng.standard_normal(len(line))
            assert f_pure(line_state(line, coeffs)) == pytest.approx(n * n, abs=1e-9)


def test_two_lines_do_not_saturate():
    lines = [ln for ln in enumerate_diagonal_lines(make_local_observable([0, 1, 2]), 2) if len(ln) >= 2]
    rng = np.random.default_rng(0)
    for _ in range(50):
        amps = np.zeros(9, dtype=complex)
        for ln in lines[:2]:
            for p in ln.points:
                amps[3 * p[0] + p[1]] = rng.standard_normal() + 1j * rng.standard_normal()
        assert f_pure(PureState.from_amplitudes(ln.obs, 2, amps)) < 4 - 1e-6


def test_f_r_examples():
    assert f_r(depolarized_ghz(2, 0.5)).estimate == pytest.approx(4 / 3, abs=1e-12)
    assert f_r(ghz_like(qubit(), 2)).estimate == pytest.approx(4)
    assert f_r(MIXED).estimate == 0.0
    assert f_r(depolarized_ghz(2, 0.5), A=2.0).estimate == pytest.approx(2 / 3)
    with pytest.raises(NonpositiveA):
        f_r(MIXED, A=0)


def test_f_s_examples():
    for n, eps in ((2, 0.3), (3, 0.7)):
        b = f_s_estimate(depolarized_ghz(n, eps))
        want = (1 - eps) ** 2 / ((1 - eps) + eps / 2 ** (n - 1)) * n ** 2
        assert b.certified_exact and b.estimate == pytest.approx(want, abs=1e-9)
    s = sample("haar", qubit(), 2, seed=1)
    assert f_s_estimate(s.density()).estimate == pytest.approx(f_pure(s), abs=1e-9)
    assert f_s_estimate(ghz_mix(2, 0.25)).estimate == pytest.approx(3, abs=1e-9)


def test_f_s_finds_balanced_support_state():
    # support spanned by two product eigenstates differing on party 2; their balanced
    # superposition has local variance 1, so the search must reach the ceiling
    rho = DensityState(qubit(), 2, np.diag([0.5, 0.5, 0, 0]))
    b = f_s_estimate(rho)
    assert b.certified_exact and b.lower <= b.estimate <= b.upper
    assert b.details["sup_local_variance"] == pytest.approx(1)


def test_rank_zero():
    # a relative cutoff above 1 declares every eigenvalue numerically zero
    with pytest.raises(RankZero):
        f_cr_estimate(MIXED, cfg=OptConfig(zero_tol=2.0))
    with pytest.raises(RankZero):
        f_s_estimate(MIXED, cfg=OptConfig(zero_tol=2.0))


def test_f_cr_examples():
    g = ghz_like(qubit(), 3)
    b = f_cr_estimate(g.density())
    assert b.certified_exact and b.estimate == pytest.approx(9)
    for n, eps in ((2, 0.25), (4, 0.5)):
        b = f_cr_estimate(ghz_mix(n, eps))
        assert b.certified_exact
        assert b.estimate == pytest.approx((1 - eps) * n * n, abs=1e-6)


def test_f_cr_chain_and_determinism():
    rho = random_density(qubit(), 2, rank=2, seed=5)
    cfg = OptConfig(restarts=6, seed=3)
    r, s, c = f_r(rho), f_s_estimate(rho, cfg=cfg), f_cr_estimate(rho, cfg=cfg)
    assert r.estimate <= s.upper + 1e-9 and r.estimate <= c.upper + 1e-9
    assert c.lower == pytest.approx(r.estimate)
    again = f_cr_estimate(rho, cfg=OptConfig(restarts=6, seed=3, threads=3))
    assert again.estimate == c.estimate


def test_bracket_ordering_enforced():
    with pytest.raises(ArithmeticError):
        QuantBracket(2.0, 1.0, 1.5, "F_R", False)


def test_thickness_examples():
    t = thickness(ghz_like(qubit(), 2))
    assert (t.delta_p1, t.delta_pj_min, t.zeta_hat) == pytest.approx((2, 0, 0))
    assert thickness(PLUS2).zeta_hat == pytest.approx(1)
    assert not thickness(product_eigenstate(qubit(), (0, 0))).defined


@pytest.mark.parametrize("dw,zeta,f", [
    # direct grid summation of the Gaussian weights (independent of the package frame code)
    (4, 1.0, 2.0), (2, 0.25, 3.2), (1, 0.06249998679798299, 3.764705929131023)])
def test_gaussian_thickness_frozen(dw, zeta, f):
    g = gaussian_grid_state(evenly_spaced(64), 4, dw)
    t = thickness(g)
    assert t.zeta_hat == pytest.approx(zeta, abs=1e-12)
    assert f_pure(g) == pytest.approx(f, abs=1e-12)
    assert f_pure(g) <= bound_thick(2, t.zeta_hat) + 1e-6
