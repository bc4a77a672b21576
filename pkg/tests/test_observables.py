import numpy as np
import pytest
from hypothesis import given, strategies as st

from collective_witness.errors import DimensionMismatch
from collective_witness.moments import variance
from collective_witness.observables import (
    SignVector,
    collective_operator,
    h_coll,
    helmert_frame,
    local_operators,
    matrix_element,
)
from collective_witness.spectral import make_local_observable, qubit
from collective_witness.states import flip_pair_state, product_eigenstate, sample


def test_weights_examples():
    np.testing.assert_array_equal(collective_operator(qubit(), 2, (1, 1)).weights, [-2, 0, 0, 2])
    np.testing.assert_array_equal(collective_operator(qubit(), 2, (1, -1)).weights, [0, -2, 2, 0])
    p1 = collective_operator(qubit(), 2, (S2, S2)).weights
    np.testing.assert_allclose(p1, h_coll(qubit(), 2).weights / np.sqrt(2), atol=1e-15)
    np.testing.assert_allclose(helmert_frame(2).operators(qubit())[0].weights, p1, atol=1e-15)


S2 = 1 / np.sqrt(2)


def test_sign_vector():
    assert SignVector.ones(3).signs == (1, 1, 1)
    with pytest.raises(ValueError):
        SignVector((1, 0))
    with pytest.raises(DimensionMismatch):
        h_coll(qubit(), 3, (1, -1))


def test_helmert_examples():
    np.testing.assert_allclose(helmert_frame(2).rows, [[S2, S2], [S2, -S2]])
    np.testing.assert_allclose(helmert_frame(3).rows[1], [S2, -S2, 0])
    np.testing.assert_array_equal(helmert_frame(1).rows, [[1.0]])


@pytest.mark.parametrize("n", range(1, 9))
def test_helmert_orthogonal(n):
    a = helmert_frame(n).rows
    assert np.max(np.abs(a @ a.T - np.eye(n))) < 1e-12
    assert np.all(a[0] == 1 / np.sqrt(n))


def test_frame_inversion():
    obs = make_local_observable([-1, 0, 2])
    n = 3
    frame = helmert_frame(n)
    ps = frame.operators(obs)
    for j, hj in enumerate(local_operators(obs, n)):
        rebuilt = sum(frame.rows[i, j] * ps[i].weights for i in range(n))
        assert np.max(np.abs(rebuilt - hj.weights)) < 1e-12


@given(st.integers(0, 2 ** 31), st.integers(1, 4))
def test_variance_decomposition(seed, n):
    state = sample("haar", qubit(), n, seed=seed)
    local = sum(variance(state, op) for op in local_operators(qubit(), n))
    frame = sum(variance(state, op) for op in helmert_frame(n).operators(qubit()))
    assert local == pytest.approx(frame, abs=1e-10)


def test_flip_pair_matrix_elements():
    plus = flip_pair_state([0, 0], 1)
    minus = flip_pair_state([0, 0], -1)
    h = h_coll(qubit(), 2)
    assert matrix_element(h, plus, minus) == pytest.approx(2)
    assert matrix_element(h, plus, plus) == pytest.approx(0)
    other = flip_pair_state([0, 1], 1)
    assert matrix_element(h, plus, other) == pytest.approx(0)


def test_matrix_element_diagonal_action():
    obs = make_local_observable([-1, 0, 2])
    op = collective_operator(obs, 2, (0.5, 3.0))
    e = product_eigenstate(obs, (2, 1))
    assert matrix_element(op, e, e) == pytest.approx(0.5 * 2 + 3.0 * 0)
    with pytest.raises(DimensionMismatch):
        matrix_element(op, e, product_eigenstate(qubit(), (0, 1)))
