import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rissnr.linalg import hermitian_psd_sqrt, kronecker, quadratic_form


def exp_decay_line(rho, n):
    idx = np.arange(n)
    return rho ** np.abs(idx[:, None] - idx[None, :]).astype(float)


def test_sqrt_identity():
    S = hermitian_psd_sqrt(np.eye(4))
    assert np.max(np.abs(S - np.eye(4))) <= 1e-12


def test_sqrt_rank_one():
    R = np.ones((2, 2))
    S = hermitian_psd_sqrt(R)
    np.testing.assert_allclose(S @ S, R, atol=1e-12)
    np.testing.assert_allclose(S, R / np.sqrt(2), atol=1e-12)


def test_sqrt_exponential_decay():
    R = exp_decay_line(0.7, 4)
    S = hermitian_psd_sqrt(R)
    assert np.linalg.norm(S @ S - R) < 1e-8
    assert np.max(np.abs(S - S.T)) <= 1e-10
    assert np.linalg.eigvalsh(S).min() >= -1e-9


def test_sqrt_complex_hermitian(rng):
    G = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
    R = G @ G.conj().T  # rank 3
    S = hermitian_psd_sqrt(R)
    assert np.linalg.norm(S @ S - R) / np.linalg.norm(R) <= 1e-8
    assert np.max(np.abs(S - S.conj().T)) <= 1e-10


def test_sqrt_rejects_bad_input():
    with pytest.raises(ValueError):
        hermitian_psd_sqrt(np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        hermitian_psd_sqrt(np.diag([1.0, -0.5]))
    with pytest.raises(ValueError):
        hermitian_psd_sqrt(np.ones((2, 3)))


@settings(max_examples=50)
@given(st.floats(0.0, 1.0), st.integers(1, 12))
def test_sqrt_property_exponential(rho, n):
    R = exp_decay_line(rho, n)
    S = hermitian_psd_sqrt(R)
    assert np.linalg.norm(S @ S - R) <= 1e-8 * max(np.linalg.norm(R), 1.0)
    assert np.linalg.eigvalsh(S).min() >= -1e-9


def test_kronecker_examples():
    np.testing.assert_array_equal(kronecker([1], [1, 1j]), [1, 1j])
    np.testing.assert_array_equal(kronecker([1, 2], [3, 4]), [3, 4, 6, 8])
    np.testing.assert_array_equal(kronecker([1, 1j], [1, -1]), [1, -1, 1j, -1j])


@given(st.lists(st.complex_numbers(max_magnitude=10), min_size=1, max_size=6),
       st.lists(st.complex_numbers(max_magnitude=10), min_size=1, max_size=6))
def test_kronecker_norm(a, b):
    k = kronecker(a, b)
    assert len(k) == len(a) * len(b)
    assert np.linalg.norm(k) == pytest.approx(np.linalg.norm(a) * np.linalg.norm(b), rel=1e-12, abs=1e-12)


def test_quadratic_form_examples():
    assert quadratic_form([1, 0, 0], np.eye(3)) == 1
    assert quadratic_form([1, 1], np.diag([1.0, 2.0])) == 3


def test_quadratic_form_dense_oracle():
    from rissnr.channel import SystemGeometry, steering_vectors

    a_b, _ = steering_vectors(SystemGeometry(M_y=2, M_z=2))
    R = exp_decay_line(0.7, 4)
    R2 = R @ R
    expected = sum(np.conj(a_b[i]) * R2[i, j] * a_b[j] for i in range(4) for j in range(4))
    q = quadratic_form(a_b, R2)
    assert q == pytest.approx(expected, rel=1e-12)
    assert abs(q.imag) <= 1e-10 * abs(q)


def test_quadratic_form_dimension_mismatch():
    with pytest.raises(ValueError):
        quadratic_form([1, 2, 3], np.eye(2))
