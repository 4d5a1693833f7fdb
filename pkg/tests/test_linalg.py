import numpy as np
import pytest
import scipy.sparse as sp

from paramexpmv.linalg import (
    as_csr,
    from_coo,
    load_matrix,
    load_vector,
    log_norm,
    save_matrix,
    save_vector,
    spmv,
    two_norm_estimate,
)


def test_as_csr_from_dense():
    A = np.array([[1.0, 2.0], [0.0, 3.0]])
    M = as_csr(A)
    assert sp.issparse(M)
    assert M.format == "csr"
    np.testing.assert_allclose(M.toarray(), A)


def test_as_csr_passthrough_keeps_values():
    A = sp.random_array((6, 6), density=0.4, rng=np.random.default_rng(0))
    M = as_csr(A)
    np.testing.assert_allclose(M.toarray(), A.toarray())


def test_from_coo():
    M = from_coo([0, 1], [1, 0], [2.0, -1.0], (2, 2))
    np.testing.assert_allclose(M.toarray(), [[0.0, 2.0], [-1.0, 0.0]])


def test_spmv_matches_dense():
    rng = np.random.default_rng(1)
    A = rng.standard_normal((7, 7))
    x = rng.standard_normal(7)
    np.testing.assert_allclose(spmv(as_csr(A), x), A @ x, rtol=1e-13)


def test_spmv_dimension_mismatch():
    A = as_csr(np.eye(3))
    with pytest.raises(ValueError):
        spmv(A, np.ones(4))


@pytest.mark.parametrize("n", [3, 40, 200])
def test_two_norm_estimate_matches_svd(n):
    rng = np.random.default_rng(n)
    A = rng.standard_normal((n, n))
    exact = np.linalg.norm(A, 2)
    approx = two_norm_estimate(as_csr(A))
    assert approx == pytest.approx(exact, rel=1e-6)


def test_two_norm_estimate_rectangular():
    rng = np.random.default_rng(5)
    A = rng.standard_normal((120, 30))
    exact = np.linalg.norm(A, 2)
    assert two_norm_estimate(as_csr(A)) == pytest.approx(exact, rel=1e-6)


def test_two_norm_estimate_zero_matrix():
    assert two_norm_estimate(as_csr(np.zeros((5, 5)))) == 0.0


def test_two_norm_estimate_deterministic():
    rng = np.random.default_rng(9)
    A = as_csr(rng.standard_normal((150, 150)))
    assert two_norm_estimate(A) == two_norm_estimate(A)


@pytest.mark.parametrize("n", [4, 90])
def test_log_norm_matches_dense_eig(n):
    rng = np.random.default_rng(n + 17)
    A = rng.standard_normal((n, n))
    exact = np.linalg.eigvalsh((A + A.T) / 2).max()
    assert log_norm(as_csr(A)) == pytest.approx(exact, rel=1e-8, abs=1e-10)


def test_log_norm_negative_definite():
    # diffusion stencil: strictly dissipative, log norm must stay negative
    n = 30
    A = from_coo(
        np.r_[np.arange(n), np.arange(n - 1), np.arange(1, n)],
        np.r_[np.arange(n), np.arange(1, n), np.arange(n - 1)],
        np.r_[-2.0 * np.ones(n), np.ones(n - 1), np.ones(n - 1)],
        (n, n),
    )
    assert log_norm(A) < 0.0


def test_matrix_roundtrip(tmp_path):
    rng = np.random.default_rng(2)
    A = sp.random_array((9, 9), density=0.3, rng=rng)
    path = tmp_path / "A.mtx"
    save_matrix(path, A)
    B = load_matrix(path)
    np.testing.assert_allclose(B.toarray(), A.toarray(), atol=1e-14)


def test_vector_roundtrip(tmp_path):
    v = np.array([1.5, -2.0, 0.0, 3.25])
    path = tmp_path / "v.mtx"
    save_vector(path, v)
    w = load_vector(path)
    np.testing.assert_allclose(w, v)
    assert w.ndim == 1
