import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lapsep.circulation import SimpleCircuit, circuit_to_matrix, decompose_circulation
from lapsep.errors import IndexOutOfRange, NegativeEntry, NotLineSumSymmetric
from lapsep.generators import make_rng, random_circulation


def test_circuit_matrices():
    np.testing.assert_array_equal(circuit_to_matrix(SimpleCircuit((1,)), 2), [[1, 0], [0, 0]])
    np.testing.assert_array_equal(circuit_to_matrix(SimpleCircuit((1, 2)), 2), [[0, 1], [1, 0]])
    m = circuit_to_matrix(SimpleCircuit((1, 2, 3)), 3)
    assert set(zip(*np.nonzero(m))) == {(0, 1), (1, 2), (2, 0)}
    with pytest.raises(IndexOutOfRange):
        circuit_to_matrix(SimpleCircuit((1, 4)), 3)


def test_circuit_canonical_rotation():
    assert SimpleCircuit((3, 1, 2)).nodes == (1, 2, 3)
    assert SimpleCircuit((3, 2, 1)).nodes == (1, 3, 2)
    with pytest.raises(ValueError):
        SimpleCircuit((1, 2, 1))


def test_decompose_examples():
    d = decompose_circulation(np.eye(2))
    assert d.terms == ((1.0, SimpleCircuit((1,))), (1.0, SimpleCircuit((2,))))
    d = decompose_circulation(np.array([[0.0, 2.0], [2.0, 0.0]]))
    assert d.terms == ((2.0, SimpleCircuit((1, 2))),)
    # greedy rule by hand: self-loop at 1, then 1 -> 2 -> 1, then self-loop at 2
    d = decompose_circulation(np.ones((2, 2)))
    assert d.terms == ((1.0, SimpleCircuit((1,))), (1.0, SimpleCircuit((1, 2))), (1.0, SimpleCircuit((2,))))
    np.testing.assert_array_equal(d.matrix(), np.ones((2, 2)))


def test_zero_matrix():
    assert decompose_circulation(np.zeros((3, 3))).terms == ()


def test_errors():
    with pytest.raises(NegativeEntry):
        decompose_circulation(np.array([[0.0, -1.0], [-1.0, 0.0]]))
    with pytest.raises(NotLineSumSymmetric):
        decompose_circulation(np.array([[0.0, 1.0], [0.0, 0.0]]))


@settings(max_examples=50, deadline=None)
@given(nodes=st.lists(st.integers(1, 9), min_size=1, max_size=9, unique=True), alpha=st.floats(1e-6, 1e6))
def test_round_trip_single_circuit(nodes, alpha):
    c = SimpleCircuit(tuple(nodes))
    d = decompose_circulation(alpha * circuit_to_matrix(c, 9))
    assert d.terms == ((alpha, c),)


@settings(max_examples=80, deadline=None)
@given(q=st.integers(1, 12), seed=st.integers(0, 2**32 - 1))
def test_reconstruction_and_size(q, seed):
    b = random_circulation(q, make_rng(seed))
    d = decompose_circulation(b)
    scale = max(1.0, np.abs(b).max())
    assert np.max(np.abs(d.matrix() - b)) <= 1e-12 * scale
    assert len(d.terms) <= np.count_nonzero(b)
    for alpha, c in d.terms:
        assert alpha > 1e-9 and len(set(c.nodes)) == len(c.nodes)


def test_residual_stays_line_sum_symmetric():
    rng = make_rng(21)
    for _ in range(20):
        b = random_circulation(8, rng)
        d = decompose_circulation(b)
        resid = b.copy()
        for alpha, c in d.terms:
            resid -= alpha * circuit_to_matrix(c, 8)
            assert np.max(np.abs(resid.sum(axis=0) - resid.sum(axis=1))) <= 1e-12
