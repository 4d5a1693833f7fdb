"""High-level API: build a parameterized solution, evaluate it anywhere in
(t, eps), and attach a priori bounds and a posteriori error estimates.

One Arnoldi run yields a compact object; every subsequent evaluation costs
only a small dense exponential, never another large matvec.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .arnoldi import InfiniteArnoldi, KrylovDecomposition, run_arnoldi
from .linalg import log_norm, two_norm_estimate
from .matfun import expm, phi_columns
from .toeplitz import MatrixPolynomial, heuristic_gamma, structured_matvec

#: Norm/log-norm accuracy used when deriving bound inputs at build time.
BOUND_INPUT_TOL = 1e-6

#: Arnoldi steps between estimate evaluations in the adaptive loop.
DEFAULT_CHECK_INTERVAL = 5


@dataclass(frozen=True)
class BoundInputs:
    """Norm data entering the a priori bounds.

    alpha = sum of all coefficient norms, mu0 the logarithmic norm of the
    constant term, beta = mu0 plus the tail norms, a the largest tail norm.
    """

    alpha: float
    beta: float
    mu0: float
    a: float

    @classmethod
    def from_polynomial(cls, P: MatrixPolynomial, tol: float = BOUND_INPUT_TOL) -> "BoundInputs":
        norms = [two_norm_estimate(C, tol) for C in P.coeffs]
        mu0 = log_norm(P.coeffs[0], tol)
        tail = norms[1:]
        return cls(
            alpha=float(sum(norms)),
            beta=float(mu0 + sum(tail)),
            mu0=float(mu0),
            a=float(max(tail, default=0.0)),
        )


@dataclass(frozen=True)
class ErrorReport:
    """Bounds and estimates for one (t, eps) target."""

    t: float
    eps: complex
    apriori_krylov: float
    apriori_truncation: float
    apriori_total: float
    aposteriori_krylov: float
    total_estimate: float


def _exp_or_inf(logval: float) -> float:
    if logval == -math.inf:
        return 0.0
    try:
        return math.exp(logval)
    except OverflowError:
        return math.inf


def _geometric_factor(ae: float, k: int) -> float:
    # limit of (1 - ae^(2k)) / (1 - ae^2) as ae -> 1 is k
    if abs(ae - 1.0) < 1e-12:
        return float(k)
    num = 1.0 - ae ** (2 * k)
    den = 1.0 - ae * ae
    return num / den


def apriori_bounds(B: BoundInputs, t: float, eps, p: int, N: int,
                   u0_norm: float) -> tuple[float, float, float]:
    """A priori (krylov, truncation, total) error bounds after p steps.

    Evaluates the superlinear Krylov bound and the series-remainder bound
    (its sharper variant when N = 1) at k = 1 + N(p-1) retained
    coefficients. Computed in log space; overflow yields +inf.
    """
    if not (t > 0):
        raise ValueError("t must be positive")
    if p < 2:
        raise ValueError("a priori bounds require p >= 2")
    ae = abs(eps)
    k = 1 + N * (p - 1)

    if t * B.alpha == 0.0:
        krylov = 0.0
    else:
        log_krylov = (
            math.log(2.0)
            + 0.5 * math.log(_geometric_factor(ae, k))
            + p * math.log(t * B.alpha)
            - math.lgamma(p + 1)
            + t * max(1.0, B.beta)
            + math.log(u0_norm)
        )
        krylov = _exp_or_inf(log_krylov)

    if ae == 0.0 or N == 0 or B.a == 0.0:
        truncation = 0.0
    elif N == 1:
        log_trunc = (
            t * (B.mu0 + ae * B.a)
            + k * math.log(ae * t * B.a)
            - math.lgamma(k + 1)
            + math.log(u0_norm)
        )
        truncation = _exp_or_inf(log_trunc)
    else:
        c2 = ae ** N * math.e * N * t * B.a
        log_c1 = (
            math.copysign(1.0, ae - 1.0) * math.log(ae) if ae != 1.0 else 0.0
        ) + t * (B.mu0 + math.e * N * B.a) + c2 - 1.0 + math.log(u0_norm)
        q = k // N
        truncation = 0.0
        for ell in range(N):
            truncation += _exp_or_inf(
                log_c1 + (q + ell) * math.log(c2) - math.lgamma(q + ell)
            )

    total = krylov + truncation
    return krylov, truncation, total


class ParameterizedSolution:
    """Evaluates approximate solutions and expansion coefficients at any (t, eps).

    Immutable after construction; evaluation touches only the small projected
    Hessenberg matrix and the stored basis.
    """

    def __init__(self, decomposition: KrylovDecomposition, poly: MatrixPolynomial,
                 scaled_poly: MatrixPolynomial, gamma: float, bounds: BoundInputs):
        self.decomposition = decomposition
        self.poly = poly
        self.scaled_poly = scaled_poly
        self.gamma = float(gamma)
        self.bounds = bounds
        self.n = poly.dim
        self.degree = poly.degree
        self.u0_norm = decomposition.beta
        self.p = decomposition.p
        self.k_max = 1 + self.degree * (self.p - 1)
        self._coeff_cache: dict[float, np.ndarray] = {}

    def with_p(self, p: int) -> "ParameterizedSolution":
        """View of the solution as if only p Arnoldi steps had been run."""
        return ParameterizedSolution(
            self.decomposition.truncate(p), self.poly, self.scaled_poly,
            self.gamma, self.bounds,
        )

    def _scaled_coefficients(self, t: float) -> np.ndarray:
        """All k_max coefficient blocks of the scaled problem, shape (k_max, n)."""
        cached = self._coeff_cache.get(t)
        if cached is not None:
            return cached
        K = self.decomposition
        w = expm(t * K.hessenberg)[:, 0] * K.beta
        C = (K.basis() @ w).reshape(-1, self.n)[:self.k_max]
        if len(self._coeff_cache) < 256:
            self._coeff_cache[t] = C
        return C

    def coefficients(self, t: float, k: int | None = None) -> np.ndarray:
        """First k expansion coefficients at time t, shape (k, n)."""
        k = self.k_max if k is None else k
        if not 1 <= k <= self.k_max:
            raise ValueError(f"k must be in [1, {self.k_max}], got {k}")
        C = self._scaled_coefficients(t)[:k]
        if self.gamma != 1.0:
            C = C * (self.gamma ** np.arange(k, dtype=float))[:, None]
        return C

    def evaluate(self, t: float, eps, k: int | None = None) -> np.ndarray:
        """Approximate solution at (t, eps) from the first k coefficients."""
        k = self.k_max if k is None else k
        if not 1 <= k <= self.k_max:
            raise ValueError(f"k must be in [1, {self.k_max}], got {k}")
        C = self._scaled_coefficients(t)
        eps_hat = self.gamma * eps
        u = C[k - 1].astype(np.result_type(C.dtype, type(eps_hat)))
        for ell in range(k - 2, -1, -1):
            u = C[ell] + eps_hat * u
        return u

    def apriori(self, t: float, eps) -> tuple[float, float, float]:
        """(krylov, truncation, total) a priori bounds at this p."""
        return apriori_bounds(self.bounds, t, eps, self.p, self.degree, self.u0_norm)

    def aposteriori_krylov(self, t: float, eps) -> float:
        """Residual-based estimate of the Krylov part of the error at (t, eps).

        Contracts the leading two expansion terms of the Arnoldi error
        against the parameter powers; zero on lucky breakdown (the
        decomposition is then exact).
        """
        K = self.decomposition
        if K.breakdown:
            return 0.0
        p, n, k = K.p, self.n, self.k_max
        h = K.residual_norm
        q = K.residual_vector
        phi1, phi2 = phi_columns(K.hessenberg, t)
        s1 = phi1[p - 1]
        s2 = phi2[p - 1]
        Lq = structured_matvec(self.scaled_poly, q)
        V = (h * K.beta) * (
            s1 * q[:k * n].reshape(k, n) + (s2 * t) * Lq[:k * n].reshape(k, n)
        )
        eps_hat = self.gamma * eps
        est = V[k - 1].astype(np.result_type(V.dtype, type(eps_hat)))
        for ell in range(k - 2, -1, -1):
            est = V[ell] + eps_hat * est
        return float(np.linalg.norm(est))

    def error_report(self, t: float, eps) -> ErrorReport:
        """Full error report at (t, eps): a priori bounds plus the usable estimate.

        For degree-1 problems the total estimate adds the sharp remainder
        bound to the Krylov estimate; otherwise the Krylov estimate alone
        is used.
        """
        if self.p >= 2:
            kry, trunc, total = self.apriori(t, eps)
        else:
            kry = trunc = total = math.inf
        post = self.aposteriori_krylov(t, eps)
        total_est = post
        if self.degree == 1:
            ae = abs(eps)
            if ae > 0.0 and self.bounds.a > 0.0:
                total_est += _exp_or_inf(
                    self.p * math.log(ae * t * self.bounds.a)
                    - math.lgamma(self.p + 1)
                    + t * (self.bounds.mu0 + ae * self.bounds.a)
                )
        return ErrorReport(
            t=t, eps=eps,
            apriori_krylov=kry, apriori_truncation=trunc, apriori_total=total,
            aposteriori_krylov=post, total_estimate=total_est,
        )


def _prepare(P: MatrixPolynomial, use_scaling: bool, gamma: float | None):
    if gamma is None:
        gamma = heuristic_gamma(P) if (use_scaling and P.degree >= 1) else 1.0
    scaled = P.scaled(gamma) if gamma != 1.0 else P
    bounds = BoundInputs.from_polynomial(P)
    return gamma, scaled, bounds


def build(P: MatrixPolynomial, u0, p: int, use_scaling: bool = True,
          gamma: float | None = None) -> ParameterizedSolution:
    """Run p Arnoldi steps and wrap the result as a parameterized solution.

    With scaling enabled the iteration runs on the balanced coefficients;
    evaluation transparently maps back, so the approximated solution is the
    same function of (t, eps) either way.
    """
    gamma, scaled, bounds = _prepare(P, use_scaling, gamma)
    K = run_arnoldi(scaled, u0, p)
    return ParameterizedSolution(K, P, scaled, gamma, bounds)


@dataclass(frozen=True)
class AdaptiveResult:
    """Outcome of the adaptive run; `converged` is False if p_max was hit first."""

    solution: ParameterizedSolution
    reports: tuple[ErrorReport, ...]
    converged: bool

    @property
    def p(self) -> int:
        return self.solution.p


def solve_adaptive(P: MatrixPolynomial, u0, targets: Sequence[tuple[float, complex]],
                   tol: float, p_max: int = 200, use_scaling: bool = True,
                   gamma: float | None = None,
                   check_interval: int = DEFAULT_CHECK_INTERVAL) -> AdaptiveResult:
    """Iterate until the error estimate at every target drops below tol.

    Estimates are evaluated every `check_interval` steps (they require a
    small dense exponential each). Returns a best-effort result with
    ``converged=False`` if p_max is reached first.
    """
    if not targets:
        raise ValueError("at least one (t, eps) target is required")
    if not (tol > 0):
        raise ValueError("tol must be positive")
    if check_interval < 1:
        raise ValueError("check_interval must be at least 1")
    gamma, scaled, bounds = _prepare(P, use_scaling, gamma)
    it = InfiniteArnoldi(scaled, u0)
    while True:
        it.step()
        at_cap = it.p >= p_max
        if it.breakdown or at_cap or it.p % check_interval == 0:
            S = ParameterizedSolution(it.decomposition(), P, scaled, gamma, bounds)
            reports = tuple(S.error_report(t, e) for t, e in targets)
            worst = max(r.total_estimate for r in reports)
            if worst <= tol:
                return AdaptiveResult(S, reports, True)
            if it.breakdown or at_cap:
                # breakdown: the decomposition is exact, no further progress possible
                return AdaptiveResult(S, reports, False)
