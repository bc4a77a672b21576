import numpy as np
import pytest
from hypothesis import given, strategies as st

from collective_witness.errors import (
    DegenerateK,
    InfeasibleLevel,
    InvalidK,
    NegativeZeta,
    NonzeroAtZero,
    NotConvex,
    ThicknessHypothesisViolated,
)
from collective_witness.witnesses import (
    bound_generic,
    bound_k,
    bound_k_thick,
    bound_table,
    bound_thick,
    certify,
    k_for_f,
    k_of_zeta,
    tradeoff,
    zeta_for_f,
    zeta_of_k,
)


def test_bound_k_examples():
    assert bound_k(5, 2) == (9, 10)
    assert bound_k(6, 3) == (18, 18)
    assert bound_k(7, 7) == (49, 49)
    with pytest.raises(InvalidK):
        bound_k(3, 0)
    with pytest.raises(InvalidK):
        bound_k(3, 4)


def test_bound_k_exhaustive():
    for n in range(1, 65):
        prev = 0
        for k in range(1, n + 1):
            fl, lin = bound_k(n, k)
            assert fl <= lin
            assert (fl == lin) == (n % k == 0)
            assert fl >= prev
            prev = fl


def test_bound_thick_examples():
    assert bound_thick(3, 0.5) == 4.5
    assert bound_thick(7, 1.0) == 7
    for n in range(1, 10):
        for k in range(1, n + 1):
            assert bound_k_thick(n, k, 0.0) == bound_k(n, k)
    with pytest.raises(NegativeZeta):
        bound_thick(3, -0.1)


def test_bound_generic_examples():
    assert bound_generic(5, 2, lambda x: x * x) == (9, 10)
    thick = lambda x: x * x / (0.5 + 0.5 * x)
    assert bound_generic(3, 3, thick)[0] == pytest.approx(4.5)
    assert bound_generic(3, 3, thick)[0] == pytest.approx(bound_thick(3, 0.5))
    for k in range(1, 7):
        assert bound_generic(6, k, lambda x: x) == pytest.approx((6, 6))
    assert bound_generic(4, 3, [0, 1, 4, 9, 16]) == (10, 12)


def test_bound_generic_rejects():
    with pytest.raises(NotConvex):
        bound_generic(4, 2, np.sqrt)
    with pytest.raises(NotConvex):
        bound_generic(3, 2, [0, 2, 3, 3.5])
    with pytest.raises(NonzeroAtZero):
        bound_generic(3, 2, lambda x: x * x + 1)
    # integer samples convex, dense grid not
    with pytest.raises(NotConvex):
        bound_generic(3, 1, lambda x: x * x + np.sin(2 * np.pi * x) * 0.2)


def test_bound_table():
    t = bound_table(6)
    assert [r[:3] for r in t.rows] == [(1, 6, 6), (2, 12, 12), (3, 18, 18), (4, 20, 24), (5, 26, 30), (6, 36, 36)]
    t = bound_table(4, 0.5)
    assert t.rows[-1][3] == pytest.approx(bound_thick(4, 0.5))


def test_certify_examples():
    v = certify(9, 3)
    assert v.depth_lower_bound == 3 and v.bound_used == "floor"
    for n in range(1, 8):
        assert certify(n, n).depth_lower_bound == 1
    assert certify(4 / 3, 2).depth_lower_bound == 1
    assert certify(16, 4).depth_lower_bound == 4
    assert "depth >= 4" in certify(16, 4).summary()
    with pytest.raises(ThicknessHypothesisViolated):
        certify(16, 4, zeta=0.5, zeta_hat=0.0)
    v = certify(5.4, 4, zeta=0.5, zeta_hat=0.6)
    assert v.bound_used == "thick" and v.depth_lower_bound == 3  # thick bounds 4, 16/3, 5.5, 6.4


def test_tradeoff_examples():
    assert zeta_of_k(10, 5) == pytest.approx(1 / 9)
    assert k_of_zeta(10, 1 / 9) == pytest.approx(5)
    assert zeta_of_k(10, 10) == 0 and zeta_of_k(10, 1) == 1
    assert k_of_zeta(10, 0) == 10 and k_of_zeta(10, 1) == 1
    assert zeta_for_f(10, 2, 15) == pytest.approx(1 / 3)
    assert tradeoff(10, "k_for_f", zeta=1 / 3, f=15) == pytest.approx(2)
    with pytest.raises(InfeasibleLevel):
        zeta_for_f(10, 1.2, 15)
    with pytest.raises(DegenerateK):
        zeta_for_f(10, 1, 5)
    with pytest.raises(InfeasibleLevel):
        k_for_f(4, 0.5, 10)
    with pytest.raises(DegenerateK):
        k_for_f(4, 1.0, 4)
    with pytest.raises(ValueError):
        tradeoff(4, "nope")


@given(st.integers(2, 60), st.floats(0, 1))
def test_k_of_zeta_round_trip(n, zeta):
    k = k_of_zeta(n, zeta)
    assert 1 - 1e-12 <= k <= n + 1e-12
    assert zeta_of_k(n, k) == pytest.approx(zeta, abs=1e-12)


@given(st.integers(2, 60), st.floats(1.5, 60), st.floats(0.01, 1))
def test_level_set_round_trip(n, k, t):
    # f in (n, k n] keeps zeta in [0, 1); f = n is the degenerate line zeta = 1
    k = min(k, n)
    f = n + t * (k * n - n)
    z = zeta_for_f(n, k, f)
    assert k_for_f(n, z, f) == pytest.approx(k, rel=1e-12)


def test_k_of_zeta_decreasing():
    for n in (2, 5, 10, 50):
        ks = [k_of_zeta(n, z) for z in np.linspace(0, 1, 101)]
        assert np.all(np.diff(ks) < 0)
