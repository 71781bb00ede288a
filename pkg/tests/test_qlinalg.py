import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bellkit import qlinalg
from bellkit.errors import DimensionMismatch, NotHermitian

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def square(d):
    return arrays(np.float64, (d, d), elements=finite)


def test_kron_matches_numpy():
    a = np.arange(4).reshape(2, 2)
    b = np.eye(3)
    assert np.array_equal(qlinalg.kron(a, b), np.kron(a, b))


def test_basis_order_up_down():
    ud = np.kron(qlinalg.UP, qlinalg.DOWN)
    assert np.array_equal(ud, [0, 1, 0, 0])


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_swap_operator_exchanges_factors(d, rng):
    s = qlinalg.swap_operator(d)
    x, y = rng.standard_normal(d), rng.standard_normal(d)
    assert np.allclose(s @ np.kron(x, y), np.kron(y, x))
    assert np.allclose(s @ s, np.eye(d * d))


@given(square(2), square(2))
def test_sym_tensor_is_swap_invariant(a, b):
    s = qlinalg.swap_operator(2)
    m = qlinalg.sym_tensor(a, b)
    assert np.allclose(m, qlinalg.sym_tensor(b, a))
    assert np.allclose(s @ m @ s, m)


def test_sym_tensor_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        qlinalg.sym_tensor(np.eye(2), np.eye(3))


@settings(max_examples=50)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_hermitian_eigen_reconstructs(d, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = a + a.conj().T
    w, v = qlinalg.hermitian_eigen(h)
    assert np.all(np.diff(w) >= -1e-12)
    assert np.allclose(v @ np.diag(w) @ v.conj().T, h, atol=1e-10)
    assert np.allclose(v.conj().T @ v, np.eye(d), atol=1e-10)


def test_hermitian_eigen_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        qlinalg.hermitian_eigen(np.array([[0, 1], [0, 0]]))


def test_psd_and_identity_predicates():
    assert qlinalg.is_psd(np.diag([1.0, 0.0]))
    assert not qlinalg.is_psd(np.diag([1.0, -1e-6]))
    assert qlinalg.is_identity(np.eye(3) + 1e-12)
    assert not qlinalg.is_identity(np.eye(3) * 1.001)


@given(square(3), square(3))
def test_trace_product(a, b):
    assert np.isclose(qlinalg.trace_product(a, b), np.trace(a @ b), atol=1e-8)


def test_operator_norm_is_largest_singular_value():
    assert np.isclose(qlinalg.operator_norm(np.diag([3.0, -5.0])), 5.0)
