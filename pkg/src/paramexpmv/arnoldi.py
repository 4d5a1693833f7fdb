"""Arnoldi iteration on the block-Toeplitz operator with a growing basis.

Each iteration applies the structured matvec to the newest basis column and
zero-pads the older columns by N blocks, so the basis matrix grows by n*N
rows and one column per step. Orthogonalization is classical Gram-Schmidt,
always performed twice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .toeplitz import MatrixPolynomial, structured_matvec

#: Relative residual below which an iteration is declared a lucky breakdown.
BREAKDOWN_TOL = 1e-14


@dataclass(frozen=True)
class KrylovDecomposition:
    """Basis, Hessenberg matrix and residual data after p Arnoldi steps.

    Without breakdown `Q` has p+1 orthonormal columns and n*(1+N*p) rows;
    column l is zero beyond its first n*(1+(l-1)*N) entries. `H` is the
    (p+1) x p Hessenberg matrix with nonnegative subdiagonal. On lucky
    breakdown `Q` has only p columns and the last row of `H` is zero: the
    decomposition is exact.
    """

    Q: np.ndarray
    H: np.ndarray
    beta: float
    block_size: int
    degree: int
    p: int
    breakdown: bool

    @property
    def hessenberg(self) -> np.ndarray:
        """Leading p x p submatrix of the Hessenberg matrix."""
        return self.H[:self.p, :self.p]

    @property
    def residual_norm(self) -> float:
        """Subdiagonal entry h_{p+1,p} (zero on breakdown)."""
        return 0.0 if self.breakdown else float(self.H[self.p, self.p - 1].real)

    @property
    def residual_vector(self):
        """Basis vector q_{p+1}, or None on breakdown."""
        return None if self.breakdown else self.Q[:, self.p]

    def basis(self) -> np.ndarray:
        """Columns q_1..q_p restricted to their joint nonzero rows."""
        rows = self.block_size * (1 + self.degree * (self.p - 1))
        return self.Q[:rows, :self.p]

    def truncate(self, p: int) -> "KrylovDecomposition":
        """Decomposition after only the first p steps (shares storage)."""
        if p == self.p:
            return self
        if not 1 <= p < self.p:
            raise ValueError(f"cannot truncate a {self.p}-step decomposition to p={p}")
        rows = self.block_size * (1 + self.degree * p)
        return KrylovDecomposition(
            Q=self.Q[:rows, :p + 1],
            H=self.H[:p + 1, :p],
            beta=self.beta,
            block_size=self.block_size,
            degree=self.degree,
            p=p,
            breakdown=False,
        )


class InfiniteArnoldi:
    """Incremental Arnoldi process for the block-Toeplitz operator.

    Mutable single-owner builder; :meth:`decomposition` returns immutable
    snapshots that remain valid as iteration continues.
    """

    def __init__(self, poly: MatrixPolynomial, u0, breakdown_tol: float = BREAKDOWN_TOL):
        u0 = np.asarray(u0).ravel()
        if u0.size != poly.dim:
            raise ValueError(
                f"start vector has length {u0.size}, expected {poly.dim}"
            )
        if not np.all(np.isfinite(u0)):
            raise ValueError("start vector has non-finite entries")
        beta = float(np.linalg.norm(u0))
        if beta == 0.0:
            raise ValueError("start vector must be nonzero")
        self.poly = poly
        self.beta = beta
        self.breakdown_tol = breakdown_tol
        self.p = 0
        self.breakdown = False
        self._dtype = np.result_type(poly.dtype, u0.dtype)
        n, N = poly.dim, poly.degree
        self._Q = np.zeros((n * (1 + 4 * max(N, 1)), 6), dtype=self._dtype)
        self._H = np.zeros((6, 5), dtype=self._dtype)
        self._Q[:n, 0] = u0 / beta

    def _ensure_capacity(self, rows: int, cols: int) -> None:
        qr, qc = self._Q.shape
        if rows > qr or cols > qc:
            newQ = np.zeros((max(rows, 2 * qr), max(cols, 2 * qc)), dtype=self._dtype)
            newQ[:qr, :qc] = self._Q
            self._Q = newQ
        hr, hc = self._H.shape
        if cols > hr or cols - 1 > hc:
            newH = np.zeros((max(cols, 2 * hr), max(cols - 1, 2 * hc)), dtype=self._dtype)
            newH[:hr, :hc] = self._H
            self._H = newH

    def step(self) -> bool:
        """Run one iteration. Returns False on (or after) lucky breakdown."""
        if self.breakdown:
            return False
        n, N = self.poly.dim, self.poly.degree
        ell = self.p + 1
        x = self._Q[:n * (1 + (ell - 1) * N), ell - 1]
        y = structured_matvec(self.poly, x)
        rows = y.size
        self._ensure_capacity(rows, ell + 1)
        norm_y = np.linalg.norm(y)

        # CGS, unconditionally repeated once (CGS2)
        Qv = self._Q[:rows, :ell]
        h = Qv.conj().T @ y
        y = y - Qv @ h
        g = Qv.conj().T @ y
        y -= Qv @ g
        h = h + g

        alpha = float(np.linalg.norm(y))
        self._H[:ell, ell - 1] = h
        self.p = ell
        if alpha <= self.breakdown_tol * norm_y:
            self._H[ell, ell - 1] = 0.0
            self.breakdown = True
            return False
        self._H[ell, ell - 1] = alpha
        self._Q[:rows, ell] = y / alpha
        return True

    def run(self, steps: int) -> int:
        """Run up to `steps` further iterations; returns the number performed."""
        done = 0
        for _ in range(steps):
            if not self.step():
                if self.breakdown:
                    done += 1
                break
            done += 1
        return done

    def decomposition(self) -> KrylovDecomposition:
        """Immutable snapshot of the current state."""
        if self.p == 0:
            raise ValueError("no iterations performed yet")
        n, N = self.poly.dim, self.poly.degree
        if self.breakdown:
            rows = n * (1 + N * (self.p - 1))
            cols = self.p
        else:
            rows = n * (1 + N * self.p)
            cols = self.p + 1
        return KrylovDecomposition(
            Q=self._Q[:rows, :cols],
            H=self._H[:self.p + 1, :self.p],
            beta=self.beta,
            block_size=n,
            degree=N,
            p=self.p,
            breakdown=self.breakdown,
        )


def run_arnoldi(P: MatrixPolynomial, u0, p: int) -> KrylovDecomposition:
    """Run p Arnoldi steps (fewer on lucky breakdown)."""
    if p < 1:
        raise ValueError("p must be at least 1")
    it = InfiniteArnoldi(P, u0)
    it.run(p)
    return it.decomposition()
