import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lapsep.errors import IndexOutOfRange, ShapeMismatch
from lapsep.tensor import TensorShape, flatten, is_entangled_position, partial_transpose, unflatten


def pt_by_definition(a, p, q):
    """Entrywise pT[(i,j),(k,l)] = A[(i,l),(k,j)], 1-based, straight from the index formula."""
    n = p * q
    out = np.empty_like(a)
    for i in range(1, p + 1):
        for j in range(1, q + 1):
            for k in range(1, p + 1):
                for l in range(1, q + 1):
                    out[(i - 1) * q + j - 1, (k - 1) * q + l - 1] = a[(i - 1) * q + l - 1, (k - 1) * q + j - 1]
    assert out.shape == (n, n)
    return out


def test_flatten_examples():
    assert flatten((3, 4), 2, 3) == 7
    assert flatten((5, 6), 1, 1) == 1
    assert unflatten((2, 2), 4) == (2, 2)


@pytest.mark.parametrize("p,q", [(1, 1), (1, 5), (4, 1), (3, 4), (6, 6)])
def test_flatten_bijection(p, q):
    seen = [flatten((p, q), i, j) for i in range(1, p + 1) for j in range(1, q + 1)]
    assert seen == list(range(1, p * q + 1))
    assert all(flatten((p, q), *unflatten((p, q), k)) == k for k in seen)


def test_index_errors():
    with pytest.raises(IndexOutOfRange):
        flatten((2, 2), 3, 1)
    with pytest.raises(IndexOutOfRange):
        unflatten((2, 2), 0)
    with pytest.raises(ShapeMismatch):
        TensorShape(0, 2)
    with pytest.raises(ShapeMismatch):
        partial_transpose(np.eye(5), (2, 2))


def test_pt_diagonal_fixed():
    d = np.diag(np.arange(1.0, 7.0))
    np.testing.assert_array_equal(partial_transpose(d, (2, 3)), d)


def test_pt_single_entangled_edge():
    a = np.zeros((4, 4))
    a[0, 0] = a[3, 3] = 0.5
    a[0, 3] = a[3, 0] = -0.5
    expected = np.diag([0.5, 0, 0, 0.5])
    expected[1, 2] = expected[2, 1] = -0.5
    np.testing.assert_array_equal(partial_transpose(a, (2, 2)), expected)


def test_pt_of_kron(rng):
    m = rng.normal(size=(2, 2))
    n = rng.normal(size=(2, 2))
    np.testing.assert_allclose(partial_transpose(np.kron(m, n), (2, 2)), np.kron(m, n.T), atol=1e-15)


@settings(max_examples=80, deadline=None)
@given(p=st.integers(1, 5), q=st.integers(1, 5), seed=st.integers(0, 2**32 - 1))
def test_pt_matches_definition(p, q, seed):
    a = np.random.default_rng(seed).normal(size=(p * q, p * q))
    np.testing.assert_array_equal(partial_transpose(a, (p, q)), pt_by_definition(a, p, q))


def test_pt_degenerate_factors(rng):
    a = rng.normal(size=(4, 4))
    np.testing.assert_array_equal(partial_transpose(a, (1, 4)), a.T)
    np.testing.assert_array_equal(partial_transpose(a, (4, 1)), a)


def test_pt_returns_copy():
    a = np.eye(4)
    out = partial_transpose(a, (2, 2))
    out[0, 0] = 7
    assert a[0, 0] == 1


def test_hermitian_preserved(rng):
    x = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    h = x + x.conj().T
    pt = partial_transpose(h, (2, 3))
    np.testing.assert_array_equal(pt, pt.conj().T)


def test_entangled_positions():
    assert is_entangled_position((2, 2), 1, 4)
    assert not is_entangled_position((2, 2), 1, 2)
    assert not is_entangled_position((3, 4), 1, 5)
    with pytest.raises(IndexOutOfRange):
        is_entangled_position((2, 2), 1, 5)
