"""Sparse/dense linear-algebra primitives: matvec, norm estimates, MatrixMarket I/O.

Sparse matrices are scipy CSR arrays in canonical form (sorted indices,
duplicates merged); vectors and small dense matrices are plain numpy arrays.
Real and complex scalars are both supported.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.io import mmread, mmwrite
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

#: Dimension at or below which norms are computed by direct dense reductions.
DENSE_CUTOFF = 64

#: Seed for the deterministic start vector of the iterative eigensolves.
_START_SEED = 1234


class NormEstimateError(RuntimeError):
    """Iterative norm estimation did not converge within the iteration cap."""

    def __init__(self, what: str, iterations: int, last_estimate: float):
        super().__init__(
            f"{what} did not converge after {iterations} iterations "
            f"(last estimate {last_estimate:.6e})"
        )
        self.iterations = iterations
        self.last_estimate = last_estimate


def as_csr(A) -> sp.csr_array:
    """Convert to a canonical CSR array (duplicates merged, indices sorted)."""
    M = sp.csr_array(A)
    M.sum_duplicates()
    M.sort_indices()
    return M


def from_coo(rows, cols, vals, shape) -> sp.csr_array:
    """Build a CSR matrix from coordinate triplets; duplicate entries are summed."""
    return as_csr(sp.coo_array((np.asarray(vals), (rows, cols)), shape=shape))


def spmv(A, x: np.ndarray) -> np.ndarray:
    """Sparse matrix times vector with an explicit dimension check."""
    A = as_csr(A)
    x = np.asarray(x)
    if x.ndim != 1 or A.shape[1] != x.shape[0]:
        raise ValueError(
            f"dimension mismatch: matrix is {A.shape[0]}x{A.shape[1]}, "
            f"vector has length {x.shape}"
        )
    return A @ x


def _start_vector(n: int) -> np.ndarray:
    rng = np.random.default_rng(_START_SEED)
    return rng.standard_normal(n)


def two_norm_estimate(A, tol: float = 1e-8) -> float:
    """Estimate the spectral norm of A to relative accuracy tol.

    Small matrices (min dimension <= DENSE_CUTOFF) use a dense SVD; larger
    ones a Lanczos iteration on the Gram operator of the thinner side.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    A = as_csr(A)
    if A.nnz == 0:
        return 0.0
    m, n = A.shape
    if min(m, n) <= DENSE_CUTOFF:
        return float(np.linalg.svd(A.toarray(), compute_uv=False)[0])
    B = A if n <= m else as_csr(A.conj().T)
    BH = as_csr(B.conj().T)
    k = B.shape[1]
    op = LinearOperator((k, k), matvec=lambda v: BH @ (B @ v), dtype=B.dtype)
    maxiter = 10 * k
    try:
        w = eigsh(op, k=1, which="LM", tol=tol, v0=_start_vector(k),
                  maxiter=maxiter, return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        last = float(np.sqrt(max(exc.eigenvalues[0], 0.0))) if len(exc.eigenvalues) else float("nan")
        raise NormEstimateError("two-norm estimation", maxiter, last) from exc
    return float(np.sqrt(max(w[0], 0.0)))


def log_norm(A, tol: float = 1e-8) -> float:
    """Logarithmic norm: the largest eigenvalue of the Hermitian part (A+A^H)/2.

    Accurate to tol*(||A||_2 + 1); dense symmetric eigensolve for dimensions
    up to DENSE_CUTOFF, Lanczos otherwise.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    A = as_csr(A)
    m, n = A.shape
    if m != n:
        raise ValueError("logarithmic norm requires a square matrix")
    H = as_csr((A + A.conj().T) * 0.5)
    if n <= DENSE_CUTOFF:
        if H.nnz == 0:
            return 0.0
        return float(np.linalg.eigvalsh(H.toarray())[-1])
    if H.nnz == 0:
        return 0.0
    maxiter = 10 * n
    try:
        w = eigsh(H, k=1, which="LA", tol=tol, v0=_start_vector(n),
                  maxiter=maxiter, return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        last = float(exc.eigenvalues[0]) if len(exc.eigenvalues) else float("nan")
        raise NormEstimateError("logarithmic-norm estimation", maxiter, last) from exc
    return float(w[0])


def load_matrix(path) -> sp.csr_array:
    """Read a MatrixMarket coordinate/array file; symmetry is expanded."""
    return as_csr(mmread(path))


def save_matrix(path, A) -> None:
    """Write a sparse matrix in MatrixMarket coordinate format."""
    mmwrite(path, sp.coo_array(as_csr(A)))


def load_vector(path) -> np.ndarray:
    """Read a vector (n x 1 MatrixMarket file) as a 1-D array."""
    v = mmread(path)
    if sp.issparse(v):
        v = v.toarray()
    v = np.asarray(v)
    if v.ndim == 2 and 1 in v.shape:
        v = v.ravel()
    if v.ndim != 1:
        raise ValueError(f"{path}: expected a vector, got shape {v.shape}")
    return v


def save_vector(path, v) -> None:
    """Write a 1-D array as an n x 1 MatrixMarket array file."""
    v = np.asarray(v)
    if v.ndim != 1:
        raise ValueError("expected a 1-D array")
    mmwrite(path, v.reshape(-1, 1))
