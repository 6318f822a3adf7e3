"""Special functions and the numerical engines shared by the whole package.

Normal, Student-t and chi-square functions are thin wrappers around
``scipy.special`` so that every module draws them from one place and the
backend can be swapped without touching callers.  ``rho_density`` is the
density of ``sqrt(chisq_m / m)``, the law of ``sigma_hat / sigma`` in the
Gaussian linear model; it is evaluated in log space so large degrees of
freedom neither overflow nor underflow prematurely.

``integrate_halfline`` and ``find_root`` are the numerical workhorses: a
vectorized adaptive Gauss-Legendre panel integrator for piecewise-smooth
integrands on a truncated half-line, and a bracketed deterministic root
finder.  Integrands declare their non-smooth points (indicator switches,
kinks) as breakpoints; these seed the initial panel boundaries so the
adaptive refinement never has to discover a discontinuity on its own.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable, Iterable

import numpy as np
from scipy import special as _sp
from scipy.optimize import brentq

__all__ = [
    "NumericsError",
    "BracketError",
    "DomainError",
    "QuadratureConfig",
    "DEFAULT_QUADRATURE",
    "std_normal_cdf",
    "std_normal_pdf",
    "std_normal_quantile",
    "rho_density",
    "rho_upper_limit",
    "t_cdf",
    "t_pdf",
    "t_quantile",
    "chi_sq_cdf",
    "chi_sq_quantile",
    "integrate_halfline",
    "find_root",
]


class NumericsError(RuntimeError):
    """A numerical routine failed to reach its accuracy target.

    Carries the best available estimate and an error bound so callers can
    decide whether a degraded result is still usable.
    """

    def __init__(self, message: str, estimate: float | None = None,
                 error_bound: float | None = None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class BracketError(ValueError):
    """A root bracket [lo, hi] does not have a sign change."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


@dataclasses.dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and limits for the half-line quadrature.

    ``tail_mass_tol`` is the probability mass of ``sqrt(chisq_m / m)`` that
    may be discarded beyond the truncation point of a weighted integral;
    callers convert it into a truncation point via :func:`rho_upper_limit`.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 4096
    tail_mass_tol: float = 1e-12

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise DomainError("quadrature tolerances must be positive")
        if not 0.0 < self.tail_mass_tol < 1.0:
            raise DomainError("tail_mass_tol must lie in (0, 1)")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be at least 1")


DEFAULT_QUADRATURE = QuadratureConfig()

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _check_dof(m) -> int:
    if isinstance(m, float) and not m.is_integer():
        raise DomainError("degrees of freedom must be a positive integer")
    m = int(m)
    if m < 1:
        raise DomainError("degrees of freedom must be a positive integer")
    return m


def std_normal_cdf(x):
    """Standard normal CDF; broadcasts, and accepts +-inf."""
    return _sp.ndtr(x)


def std_normal_pdf(x):
    """Standard normal density; underflows to 0 silently for huge |x|."""
    x = np.asarray(x, dtype=float)
    with np.errstate(under="ignore"):
        out = _INV_SQRT_2PI * np.exp(-0.5 * x * x)
    return out if out.ndim else float(out)


def std_normal_quantile(p):
    """Inverse standard normal CDF; p in [0, 1], with 0 and 1 mapping to -+inf."""
    p_arr = np.asarray(p, dtype=float)
    if np.any((p_arr < 0.0) | (p_arr > 1.0)):
        raise DomainError("quantile level must lie in [0, 1]")
    out = _sp.ndtri(p_arr)
    return out if out.ndim else float(out)


def rho_density(s, m):
    """Density of sqrt(chisq_m / m) at s; zero for s <= 0.

    Computed in log space: the normalizing constant uses gammaln so that
    large m stays finite.
    """
    m = _check_dof(m)
    s_arr = np.asarray(s, dtype=float)
    out = np.zeros(s_arr.shape)
    pos = s_arr > 0.0
    if np.any(pos):
        sp_ = s_arr[pos]
        log_norm = math.log(2.0) + 0.5 * m * math.log(0.5 * m) - _sp.gammaln(0.5 * m)
        with np.errstate(under="ignore"):
            out[pos] = np.exp(log_norm + (m - 1.0) * np.log(sp_) - 0.5 * m * sp_ * sp_)
    return out if out.ndim else float(out)


def rho_upper_limit(m, tail_mass_tol: float) -> float:
    """Truncation point s_max with P(sqrt(chisq_m / m) > s_max) = tail_mass_tol."""
    m = _check_dof(m)
    if not 0.0 < tail_mass_tol < 1.0:
        raise DomainError("tail_mass_tol must lie in (0, 1)")
    return math.sqrt(_sp.chdtri(m, tail_mass_tol) / m)


def t_cdf(x, m):
    """CDF of Student's t with m degrees of freedom; accepts +-inf."""
    m = _check_dof(m)
    x_arr = np.asarray(x, dtype=float)
    out = np.where(np.isneginf(x_arr), 0.0,
                   np.where(np.isposinf(x_arr), 1.0,
                            _sp.stdtr(m, np.where(np.isfinite(x_arr), x_arr, 0.0))))
    return out if out.ndim else float(out)


def t_pdf(x, m):
    """Density of Student's t with m degrees of freedom."""
    m = _check_dof(m)
    x_arr = np.asarray(x, dtype=float)
    log_norm = (_sp.gammaln(0.5 * (m + 1)) - _sp.gammaln(0.5 * m)
                - 0.5 * math.log(m * math.pi))
    with np.errstate(under="ignore"):
        out = np.exp(log_norm - 0.5 * (m + 1) * np.log1p(x_arr * x_arr / m))
    return out if out.ndim else float(out)


def t_quantile(p, m):
    """Inverse Student-t CDF; p in [0, 1], with 0 and 1 mapping to -+inf."""
    m = _check_dof(m)
    p_arr = np.asarray(p, dtype=float)
    if np.any((p_arr < 0.0) | (p_arr > 1.0)):
        raise DomainError("quantile level must lie in [0, 1]")
    interior = (p_arr > 0.0) & (p_arr < 1.0)
    with np.errstate(divide="ignore"):
        out = np.where(interior, _sp.stdtrit(m, np.where(interior, p_arr, 0.5)),
                       np.where(p_arr <= 0.0, -np.inf, np.inf))
    return out if out.ndim else float(out)


def chi_sq_cdf(x, m):
    """Chi-square CDF with m degrees of freedom; +inf maps to 1."""
    m = _check_dof(m)
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0.0):
        raise DomainError("chi-square CDF argument must be nonnegative")
    out = np.where(np.isposinf(x_arr), 1.0,
                   _sp.gammainc(0.5 * m, 0.5 * np.where(np.isfinite(x_arr), x_arr, 0.0)))
    return out if out.ndim else float(out)


def chi_sq_quantile(p, m):
    """Inverse chi-square CDF via the regularized incomplete gamma inverse."""
    m = _check_dof(m)
    p_arr = np.asarray(p, dtype=float)
    if np.any((p_arr < 0.0) | (p_arr >= 1.0)):
        raise DomainError("quantile level must lie in [0, 1)")
    out = 2.0 * _sp.gammaincinv(0.5 * m, p_arr)
    return out if out.ndim else float(out)


# Embedded 7- and 15-point Gauss-Legendre rules on [-1, 1].  Node sets are
# disjoint and never include panel endpoints, so integrands are only ever
# evaluated strictly inside a panel.
_GL7_X, _GL7_W = np.polynomial.legendre.leggauss(7)
_GL15_X, _GL15_W = np.polynomial.legendre.leggauss(15)


def _panel_rule(f, lo: np.ndarray, hi: np.ndarray):
    """GL15 value and |GL15 - GL7| error estimate per panel, one call to f."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x7 = mid[:, None] + half[:, None] * _GL7_X
    x15 = mid[:, None] + half[:, None] * _GL15_X
    xs = np.concatenate([x7.ravel(), x15.ravel()])
    vals = np.asarray(f(xs), dtype=float)
    if vals.shape != xs.shape:
        raise DomainError("integrand must map an array to an array of the same shape")
    v7 = vals[:x7.size].reshape(x7.shape)
    v15 = vals[x7.size:].reshape(x15.shape)
    i15 = half * (v15 @ _GL15_W)
    i7 = half * (v7 @ _GL7_W)
    return i15, np.abs(i15 - i7)


def _integrate_with_bound(f: Callable, breakpoints: Iterable[float], upper: float,
                          cfg: QuadratureConfig):
    """Adaptive panel integration of f over (0, upper); returns (value, bound).

    The returned bound is the summed |GL15 - GL7| panel deviation, a
    conservative estimate of the remaining quadrature error.
    """
    upper = float(upper)
    if not math.isfinite(upper):
        raise DomainError("truncation point must be finite")
    if upper <= 0.0:
        return 0.0, 0.0
    cuts = sorted({float(b) for b in breakpoints if 0.0 < float(b) < upper})
    edges = np.array([0.0] + cuts + [upper])
    lo = edges[:-1].copy()
    hi = edges[1:].copy()
    vals, errs = _panel_rule(f, lo, hi)
    while True:
        if np.any(np.isnan(vals)):
            raise NumericsError("integrand produced NaN",
                                estimate=float(np.nansum(vals)),
                                error_bound=math.inf)
        total = float(vals.sum())
        err = float(errs.sum())
        target = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        if err <= target:
            return total, err
        if len(lo) >= cfg.max_subdivisions:
            raise NumericsError(
                f"quadrature error {err:.3e} above target {target:.3e} after "
                f"{len(lo)} panels", estimate=total, error_bound=err)
        # Split every panel whose share of the error budget is exceeded (at
        # least the single worst one), so refinement stays a bounded number
        # of vectorized rounds.
        split = errs > target / (2.0 * len(errs))
        if not split.any():
            split[int(np.argmax(errs))] = True
        mid = 0.5 * (lo[split] + hi[split])
        child_vals, child_errs = _panel_rule(
            f, np.concatenate([lo[split], mid]), np.concatenate([mid, hi[split]]))
        lo = np.concatenate([lo[~split], lo[split], mid])
        hi = np.concatenate([hi[~split], mid, hi[split]])
        vals = np.concatenate([vals[~split], child_vals])
        errs = np.concatenate([errs[~split], child_errs])


def integrate_halfline(f: Callable, breakpoints: Iterable[float] = (), *,
                       upper: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Integrate a vectorized integrand over (0, upper) to cfg tolerances.

    ``breakpoints`` mark non-smooth points of f; values outside (0, upper)
    are ignored.  Weighted integrands pick ``upper`` from
    :func:`rho_upper_limit` so that the discarded tail mass is below
    ``cfg.tail_mass_tol``.  Raises :class:`NumericsError` (carrying the best
    estimate and its error bound) if the tolerance cannot be met within
    ``cfg.max_subdivisions`` panels.
    """
    value, _ = _integrate_with_bound(f, breakpoints, upper, cfg)
    return value


def find_root(f: Callable[[float], float], lo: float, hi: float,
              tol: float = 1e-10) -> float:
    """Deterministic bracketed root of a scalar function via Brent's method."""
    lo = float(lo)
    hi = float(hi)
    if not lo < hi:
        raise DomainError("root bracket needs lo < hi")
    if not tol > 0.0:
        raise DomainError("root tolerance must be positive")
    flo = float(f(lo))
    fhi = float(f(hi))
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise BracketError(
            f"no sign change on [{lo:g}, {hi:g}]: f(lo)={flo:g}, f(hi)={fhi:g}")
    try:
        root = brentq(f, lo, hi, xtol=tol, maxiter=300)
    except RuntimeError as exc:  # scipy reports non-convergence this way
        raise NumericsError(f"root refinement failed: {exc}") from exc
    return float(root)
