import numpy as np
import pytest
import scipy.linalg

from paramexpmv.matfun import expm, phi_columns


def _phi_series(A, k, terms=60):
    """Taylor-series oracle for phi_k(A) e_1."""
    import math

    p = A.shape[0]
    out = np.zeros(A.shape, dtype=A.dtype)
    term = np.eye(p, dtype=A.dtype)
    for j in range(terms):
        out = out + term / math.factorial(j + k)
        term = term @ A
    return out[:, 0]


def test_expm_matches_scipy():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((8, 8))
    np.testing.assert_allclose(expm(A), scipy.linalg.expm(A), rtol=1e-12)


def test_expm_rejects_nonsquare():
    with pytest.raises(ValueError):
        expm(np.ones((2, 3)))


def test_expm_rejects_nonfinite():
    A = np.eye(3)
    A[0, 0] = np.nan
    with pytest.raises(ValueError):
        expm(A)


@pytest.mark.parametrize("t", [0.3, 1.0, 2.5])
def test_phi_columns_against_series(t):
    rng = np.random.default_rng(3)
    H = np.triu(rng.standard_normal((6, 6)), -1) * 0.7
    cols = phi_columns(H, t)
    ref1 = _phi_series(t * H, 1)
    ref2 = _phi_series(t * H, 2)
    np.testing.assert_allclose(cols.phi1_col, ref1, rtol=1e-10, atol=1e-13)
    np.testing.assert_allclose(cols.phi2_col, ref2, rtol=1e-10, atol=1e-13)


def test_phi_columns_scalar_identities():
    # phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2
    z = 0.83
    cols = phi_columns(np.array([[z]]), 1.0)
    assert cols.phi1_col[0] == pytest.approx((np.exp(z) - 1) / z, rel=1e-12)
    assert cols.phi2_col[0] == pytest.approx((np.exp(z) - 1 - z) / z**2, rel=1e-12)


def test_phi_columns_complex():
    rng = np.random.default_rng(4)
    H = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    H = np.triu(H, -1) * 0.5
    cols = phi_columns(H, 0.9)
    ref1 = _phi_series(0.9 * H, 1)
    np.testing.assert_allclose(cols.phi1_col, ref1, rtol=1e-10, atol=1e-13)
