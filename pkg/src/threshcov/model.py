"""Gaussian linear regression scaffolding: y = X theta + u, u ~ N(0, sigma^2 I).

``compute_xi`` exposes the per-component standard-error scale
``xi_i = sqrt(((X'X / n)^{-1})_{ii})`` through a QR factorization, never an
explicit inverse.  ``ls_fit`` runs least squares with the unbiased residual
variance estimate, and ``standard_ls_interval`` gives the classical z- and
t-based half-lengths that the thresholded intervals are measured against.
Component indexes are 1-based throughout, matching the usual numbering of
regression coefficients.
"""

from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np
from scipy.linalg import solve_triangular

from .special import (
    DomainError,
    std_normal_quantile,
    t_quantile,
)

__all__ = [
    "VarianceMode",
    "ProblemSetup",
    "reference_setup",
    "RegressionDraw",
    "compute_xi",
    "compute_xi_all",
    "ls_fit",
    "standard_ls_interval",
    "load_design_csv",
]


class VarianceMode(enum.Enum):
    """Whether sigma is treated as known or replaced by sigma_hat."""

    KNOWN = "known"
    ESTIMATED = "estimated"

    @classmethod
    def from_label(cls, label: str) -> "VarianceMode":
        for mode in cls:
            if mode.value == label:
                return mode
        raise DomainError(f"unknown variance mode {label!r}")


@dataclasses.dataclass(frozen=True)
class ProblemSetup:
    """Scalar summary of one watched component of a regression problem.

    n: sample size; k: number of regressors (rank of the design);
    xi: standard-error scale of the watched component; sigma: noise scale;
    eta: threshold tuning parameter; component_index: 1-based index of the
    watched component.
    """

    n: int
    k: int
    xi: float = 1.0
    sigma: float = 1.0
    eta: float = 0.05
    component_index: int = 1

    def __post_init__(self):
        if self.k < 1 or self.n < self.k:
            raise DomainError("need n >= k >= 1")
        if not (self.xi > 0.0 and math.isfinite(self.xi)):
            raise DomainError("xi must be positive and finite")
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise DomainError("sigma must be positive and finite")
        if not (self.eta > 0.0 and math.isfinite(self.eta)):
            raise DomainError("eta must be positive and finite")
        if not 1 <= self.component_index <= self.k:
            raise DomainError("component_index must lie in 1..k")

    @property
    def residual_dof(self) -> int:
        return self.n - self.k

    @property
    def root_n(self) -> float:
        return math.sqrt(self.n)

    def require_estimated_variance(self) -> int:
        """Residual degrees of freedom, failing fast when sigma_hat does not exist."""
        if self.n <= self.k:
            raise DomainError("estimated-variance operations need n > k")
        return self.n - self.k


def reference_setup(eta: float = 0.05, **overrides) -> ProblemSetup:
    """Default scenario n=40, k=35, xi=1, sigma=1 used by the tables and figures."""
    params = dict(n=40, k=35, xi=1.0, sigma=1.0, eta=eta)
    params.update(overrides)
    return ProblemSetup(**params)


@dataclasses.dataclass(frozen=True, eq=False)
class RegressionDraw:
    """One least-squares fit: estimates, residual variance, and the inputs.

    sigma_hat_sq is None when n == k (no residual degrees of freedom).
    theta is the true parameter when the caller knows it (simulations).
    """

    ls_estimate: np.ndarray
    sigma_hat_sq: float | None
    y: np.ndarray
    theta: np.ndarray | None = None


def _full_rank_qr(X: np.ndarray):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DomainError("design matrix must be two-dimensional")
    n, k = X.shape
    if k < 1 or n < k:
        raise DomainError("design matrix needs n >= k >= 1")
    Q, R = np.linalg.qr(X, mode="reduced")
    diag = np.abs(np.diag(R))
    if diag.min() <= max(n, k) * np.finfo(float).eps * max(diag.max(), np.finfo(float).tiny):
        raise DomainError("design matrix is rank-deficient")
    return Q, R


def compute_xi_all(X) -> np.ndarray:
    """xi_i for every component: row norms of R^{-T} scaled by sqrt(n)."""
    X = np.asarray(X, dtype=float)
    _, R = _full_rank_qr(X)
    n, k = X.shape
    rinv_t = solve_triangular(R, np.eye(k), trans="T", lower=False)
    return np.sqrt(n * (rinv_t ** 2).sum(axis=0))


def compute_xi(X, component_index: int) -> float:
    """xi of one 1-based component."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DomainError("design matrix must be two-dimensional")
    if not 1 <= component_index <= X.shape[1]:
        raise DomainError("component_index must lie in 1..k")
    return float(compute_xi_all(X)[component_index - 1])


def ls_fit(X, y, theta=None) -> RegressionDraw:
    """Least squares via QR; unbiased sigma_hat^2 when n > k, else None."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    Q, R = _full_rank_qr(X)
    n, k = X.shape
    if y.shape != (n,):
        raise DomainError("response length must match the number of rows of X")
    coef = solve_triangular(R, Q.T @ y, lower=False)
    if n > k:
        resid = y - X @ coef
        sigma_hat_sq = float(resid @ resid) / (n - k)
    else:
        sigma_hat_sq = None
    theta_arr = None if theta is None else np.asarray(theta, dtype=float)
    return RegressionDraw(ls_estimate=coef, sigma_hat_sq=sigma_hat_sq, y=y,
                          theta=theta_arr)


def standard_ls_interval(setup: ProblemSetup, mode: VarianceMode, alpha: float) -> float:
    """Half-length of the classical two-sided LS interval at level 1 - alpha.

    Known sigma: (sigma xi / sqrt(n)) times the normal quantile.  Estimated:
    the multiplier of sigma_hat solving the analogous Student-t equation,
    which reduces to the t quantile; returned as the half-length per unit
    sigma_hat, i.e. xi t_{m,1-alpha/2} / sqrt(n).
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    mode = VarianceMode(mode)
    if mode is VarianceMode.KNOWN:
        return float(setup.sigma * setup.xi
                     * std_normal_quantile(1.0 - 0.5 * alpha) / setup.root_n)
    m = setup.require_estimated_variance()
    return float(setup.xi * t_quantile(1.0 - 0.5 * alpha, m) / setup.root_n)


def load_design_csv(path) -> np.ndarray:
    """Read a design matrix from a headerless CSV of floats."""
    X = np.loadtxt(path, delimiter=",", dtype=float, ndmin=2)
    if X.size == 0:
        raise DomainError(f"design file {path} is empty")
    return X
