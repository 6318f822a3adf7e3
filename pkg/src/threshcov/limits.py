"""Limiting laws of the scaled thresholding error along parameter sequences.

Two regimes, distinguished by how the threshold scales.  In the
conservative regime sqrt(n) eta_n converges to a finite e >= 0 and the
error is scaled by sqrt(n)/xi: the limit is a Student-t law deformed around
the origin, indexed by e and the local parameter nu = lim sqrt(n) theta_n /
(sigma xi).  In the consistent regime sqrt(n) eta_n diverges and the error
is scaled by 1/(xi eta): the limit lives on [-1, 1] and is indexed by
zeta = lim theta_n / (sigma xi eta_n); for finite residual degrees of
freedom it is a chi-square functional, for infinite degrees of freedom it
degenerates to point masses (with a two-point mixture in one hard-threshold
boundary case governed by an auxiliary weight).
"""

from __future__ import annotations

import dataclasses
import math
from typing import Iterable, Sequence, Tuple

import numpy as np

from .estimators import EstimatorKind
from .finite_sample import ScalingFactor, tilde_cdf
from .model import ProblemSetup
from .special import (
    DEFAULT_QUADRATURE,
    DomainError,
    QuadratureConfig,
    chi_sq_cdf,
    integrate_halfline,
    rho_density,
    rho_upper_limit,
    std_normal_cdf,
    t_cdf,
)

__all__ = [
    "ConservativeRegime",
    "ConsistentRegime",
    "conservative_limit_cdf",
    "consistent_limit_cdf",
    "hard_weight",
    "limit_atoms",
    "weak_convergence_gaps",
    "weak_convergence_gap",
]


def _check_limit_dof(m):
    if isinstance(m, float) and math.isinf(m) and m > 0:
        return math.inf
    if isinstance(m, float) and not m.is_integer():
        raise DomainError("degrees of freedom must be a positive integer or inf")
    m = int(m)
    if m < 1:
        raise DomainError("degrees of freedom must be a positive integer or inf")
    return m


@dataclasses.dataclass(frozen=True)
class ConservativeRegime:
    """Limit data when sqrt(n) eta_n -> e finite.

    nu: limit of sqrt(n) theta_n / (sigma xi), any extended real;
    e: limit of sqrt(n) eta_n, finite and nonnegative;
    m: residual degrees of freedom held fixed along the sequence.
    """

    nu: float
    e: float
    m: int | float

    def __post_init__(self):
        if math.isnan(self.nu):
            raise DomainError("nu must not be NaN")
        if not (self.e >= 0.0 and math.isfinite(self.e)):
            raise DomainError("e must be finite and nonnegative")
        object.__setattr__(self, "m", _check_limit_dof(self.m))


@dataclasses.dataclass(frozen=True)
class ConsistentRegime:
    """Limit data when sqrt(n) eta_n -> inf and eta_n -> 0.

    zeta: limit of theta_n / (sigma xi eta_n), any extended real;
    m: residual degrees of freedom, a positive integer or math.inf;
    hard_aux: auxiliary limits (f, r, s) needed only by the hard estimator
    when m is infinite and |zeta| = 1 -- see :func:`hard_weight`.
    """

    zeta: float
    m: int | float
    hard_aux: Tuple[float, float, float] | None = None

    def __post_init__(self):
        if math.isnan(self.zeta):
            raise DomainError("zeta must not be NaN")
        object.__setattr__(self, "m", _check_limit_dof(self.m))
        if self.hard_aux is not None:
            aux = tuple(float(v) for v in self.hard_aux)
            if len(aux) != 3:
                raise DomainError("hard_aux must be a triple (f, r, s)")
            object.__setattr__(self, "hard_aux", aux)


def _step(x: float, location: float) -> float:
    return 1.0 if x >= location else 0.0


def _stable_zbar_pair(u, v, nu):
    """Roots of the adaptive-soft limit inversion; same stabilization as the
    finite-sample pair, with product z1 z2 = -(u nu + v^2)."""
    big_a = 0.5 * (u - nu)
    big_b = np.hypot(0.5 * (u + nu), v)
    prod = u * nu + v * v
    with np.errstate(divide="ignore", invalid="ignore"):
        z2 = np.where(big_a >= 0.0, big_a + big_b, prod / (big_b - big_a))
        z1 = np.where(big_a <= 0.0, big_a - big_b, -prod / (big_a + big_b))
    return z1, z2


def _conservative_integrand(kind: EstimatorKind, x: float, nu: float, e: float, m: int):
    def f(s):
        rho = rho_density(s, m)
        c = x * s + nu
        if kind is EstimatorKind.HARD:
            lim = e * s
            first = np.abs(c) > lim
            second = (~first) & (c >= 0.0)
            vals = np.where(first, std_normal_cdf(x * s), 0.0)
            vals = np.where(second, std_normal_cdf(-nu + e * s), vals)
            third = ~(first | second)
            vals = np.where(third, std_normal_cdf(-nu - e * s), vals)
        elif kind is EstimatorKind.SOFT:
            vals = np.where(c >= 0.0,
                            std_normal_cdf((x + e) * s),
                            std_normal_cdf((x - e) * s))
        else:
            z1, z2 = _stable_zbar_pair(x * s, e * s, nu)
            vals = np.where(c >= 0.0, std_normal_cdf(z2), std_normal_cdf(z1))
        return vals * rho

    return f


def _conservative_switch_points(kind: EstimatorKind, x: float, nu: float, e: float):
    pts = []

    def add(num: float, den: float):
        if den != 0.0:
            s = num / den
            if s > 0.0 and math.isfinite(s):
                pts.append(s)

    if kind is EstimatorKind.HARD:
        add(-nu, x - e)
        add(-nu, x + e)
    if x != 0.0:
        add(-nu, x)
    return tuple(pts)


def conservative_limit_cdf(kind, x, regime: ConservativeRegime,
                           cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """CDF of the conservative-regime limit law at x.

    Only finite residual degrees of freedom are supported: with m = inf the
    estimated-variance limits coincide with the known-variance family and
    are deliberately not duplicated here.
    """
    kind = EstimatorKind(kind)
    if math.isinf(regime.m):
        raise DomainError("conservative limits are provided for finite m only")
    m = regime.m
    nu = regime.nu
    e = regime.e
    x = float(x)
    if math.isnan(x):
        raise DomainError("CDF argument must not be NaN")
    if math.isinf(x):
        return 1.0 if x > 0.0 else 0.0
    if e == 0.0:
        return float(t_cdf(x, m))
    if math.isinf(nu):
        if kind is EstimatorKind.SOFT:
            return float(t_cdf(x + math.copysign(e, nu), m))
        return float(t_cdf(x, m))
    if nu == 0.0:
        if kind is EstimatorKind.HARD:
            if abs(x) > e:
                return float(t_cdf(x, m))
            return float(t_cdf(e, m) if x >= 0.0 else t_cdf(-e, m))
        if kind is EstimatorKind.SOFT:
            return float(t_cdf(x + e, m) if x >= 0.0 else t_cdf(x - e, m))
        half = math.sqrt(0.25 * x * x + e * e)
        return float(t_cdf(0.5 * x + half, m) if x >= 0.0 else t_cdf(0.5 * x - half, m))
    upper = rho_upper_limit(m, cfg.tail_mass_tol)
    value = integrate_halfline(
        _conservative_integrand(kind, x, nu, e, m),
        _conservative_switch_points(kind, x, nu, e),
        upper=upper, cfg=cfg)
    return min(1.0, max(0.0, value))


def hard_weight(f: float, r: float, s: float | None = None) -> float:
    """Mixing weight for the hard estimator at the boundary |zeta| = 1, m = inf.

    f >= 0 and r are the curvature and offset limits of the boundary
    sequence; s is their joint limit, required only when f is infinite.
    w(0, r, .) = Phi(r); w(inf, ., s) = Phi(sqrt(2) s); in between the
    weight is a Gaussian average of Phi(f t / sqrt(2) + r), which
    collapses to the single normal CDF below.
    """
    f = float(f)
    if math.isnan(f) or f < 0.0:
        raise DomainError("f must be nonnegative")
    if f == 0.0:
        return float(std_normal_cdf(r))
    if math.isinf(f):
        if s is None or math.isnan(s):
            raise DomainError("the s limit is required when f is infinite")
        return float(std_normal_cdf(math.sqrt(2.0) * float(s)))
    r = float(r)
    if math.isinf(r):
        return 1.0 if r > 0.0 else 0.0
    return float(std_normal_cdf(r / math.sqrt(1.0 + 0.5 * f * f)))


def _consistent_cdf_infinite_dof(kind: EstimatorKind, x: float,
                                 regime: ConsistentRegime) -> float:
    zeta = regime.zeta
    az = abs(zeta)
    if kind is EstimatorKind.HARD:
        if az < 1.0:
            return _step(x, -zeta)
        if az > 1.0:
            return _step(x, 0.0)
        if regime.hard_aux is None:
            raise DomainError(
                "hard thresholding with |zeta| = 1 and infinite degrees of "
                "freedom needs the (f, r, s) auxiliary limits")
        w = hard_weight(*regime.hard_aux)
        return w * _step(x, -zeta) + (1.0 - w) * _step(x, 0.0)
    if kind is EstimatorKind.SOFT:
        if az <= 1.0:
            return _step(x, -zeta)
        return _step(x, -math.copysign(1.0, zeta))
    if az <= 1.0:
        return _step(x, -zeta)
    if math.isinf(zeta):
        return _step(x, 0.0)
    return _step(x, -1.0 / zeta)


def consistent_limit_cdf(kind, x, regime: ConsistentRegime) -> float:
    """CDF of the consistent-regime limit law at x; support is [-1, 1]."""
    kind = EstimatorKind(kind)
    x = float(x)
    if math.isnan(x):
        raise DomainError("CDF argument must not be NaN")
    if math.isinf(x):
        return 1.0 if x > 0.0 else 0.0
    if math.isinf(regime.m):
        return _consistent_cdf_infinite_dof(kind, x, regime)
    m = regime.m
    zeta = regime.zeta
    if zeta == 0.0:
        return _step(x, 0.0)
    if math.isinf(zeta):
        if kind is EstimatorKind.SOFT:
            return _step(x, -math.copysign(1.0, zeta))
        return _step(x, 0.0)
    mz2 = m * zeta * zeta
    if zeta > 0.0:
        if x < -1.0:
            return 0.0
        if x >= 0.0:
            return 1.0
        upper_arg = mz2 / (x * x)
        if kind is EstimatorKind.HARD:
            return float(chi_sq_cdf(upper_arg, m) - chi_sq_cdf(mz2, m))
        if kind is EstimatorKind.SOFT:
            return float(chi_sq_cdf(upper_arg, m))
        return float(chi_sq_cdf(upper_arg, m) - chi_sq_cdf(mz2 * x * x, m))
    if x < 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    inv_tail = 0.0 if x == 0.0 else 1.0 - float(chi_sq_cdf(mz2 / (x * x), m))
    if kind is EstimatorKind.HARD:
        return float(chi_sq_cdf(mz2, m)) + inv_tail
    if kind is EstimatorKind.SOFT:
        return inv_tail
    return float(chi_sq_cdf(mz2 * x * x, m)) + inv_tail


def limit_atoms(kind, regime) -> tuple:
    """Locations where the limit law can carry point mass.

    Used to restrict convergence checks to continuity points.
    """
    kind = EstimatorKind(kind)
    if isinstance(regime, ConservativeRegime):
        return (0.0,)
    pts = {0.0, 1.0, -1.0}
    zeta = regime.zeta
    if math.isfinite(zeta):
        pts.add(-zeta)
        if zeta != 0.0:
            pts.add(-1.0 / zeta)
    return tuple(sorted(pts))


def weak_convergence_gaps(kind, setup_sequence: Iterable[Tuple[ProblemSetup, float]],
                          regime, grid: Sequence[float],
                          exclusion_radius: float = 0.05,
                          cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> list:
    """Sup-norm gap between finite-sample and limit CDFs, one per setup.

    setup_sequence yields (setup, theta_i) pairs; the scaling matching the
    regime (conservative: sqrt(n)/xi, consistent: 1/(xi eta)) is applied
    automatically.  Grid points within exclusion_radius of a potential limit
    atom are dropped: weak convergence holds at continuity points only.
    """
    kind = EstimatorKind(kind)
    atoms = limit_atoms(kind, regime)
    xs = [float(x) for x in grid
          if all(abs(float(x) - p) > exclusion_radius for p in atoms)]
    if not xs:
        raise DomainError("no continuity points remain in the grid")
    if isinstance(regime, ConservativeRegime):
        limit_vals = [conservative_limit_cdf(kind, x, regime, cfg) for x in xs]
        scaling = ScalingFactor.conservative
    elif isinstance(regime, ConsistentRegime):
        limit_vals = [consistent_limit_cdf(kind, x, regime) for x in xs]
        scaling = ScalingFactor.consistent
    else:
        raise DomainError("regime must be ConservativeRegime or ConsistentRegime")
    gaps = []
    for setup, theta_i in setup_sequence:
        a = scaling(setup)
        gap = max(abs(tilde_cdf(kind, x, setup, theta_i, a, cfg) - lv)
                  for x, lv in zip(xs, limit_vals))
        gaps.append(float(gap))
    return gaps


def weak_convergence_gap(kind, setup_sequence, regime, grid,
                         exclusion_radius: float = 0.05,
                         cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Gap at the largest sample size of the sequence."""
    seq = sorted(setup_sequence, key=lambda pair: pair[0].n)
    if not seq:
        raise DomainError("setup_sequence must not be empty")
    return weak_convergence_gaps(kind, seq[-1:], regime, grid,
                                 exclusion_radius, cfg)[0]
