"""Two asymptotic regimes and the finite-sample law's march toward them.

Tuning eta_n can shrink fast (sqrt(n) eta_n -> e, "conservative") or slowly
(sqrt(n) eta_n -> inf, "consistent").  The limiting laws differ in kind:
conservative limits are smooth t-like mixtures, consistent limits are chi
functionals with point masses.  Here we watch the exact finite-sample law
approach each along a sequence of sample sizes.

Run:  python demos/05_limit_convergence.py
"""

import math

import numpy as np

from threshcov import (ConservativeRegime, ConsistentRegime, ProblemSetup,
                       conservative_limit_cdf, consistent_limit_cdf,
                       weak_convergence_gaps)


def conservative_demo():
    m, e = 5, 1.0
    regime = ConservativeRegime(nu=0.0, e=e, m=m)
    grid = np.linspace(-3.0, 3.0, 41)
    seq = []
    for n in (50, 500, 5000):
        setup = ProblemSetup(n=n, k=n - m, eta=e / math.sqrt(n))
        seq.append((setup, setup.sigma * setup.xi / n))
    gaps = weak_convergence_gaps("hard", seq, regime, grid)
    print("Conservative regime: eta_n = 1/sqrt(n), theta_n -> 0, m = 5.")
    print("Sup-distance between the exact law of the hard kind and its limit:")
    for n, g in zip((50, 500, 5000), gaps):
        print(f"  n = {n:5d}: {g:.5f}")
    x = 0.8
    print(f"Limit CDF at x = {x}: "
          f"{conservative_limit_cdf('hard', x, regime):.6f}")
    print()


def consistent_demo():
    m, zeta = 5, 0.4
    regime = ConsistentRegime(zeta=zeta, m=m)
    grid = np.linspace(-3.0, 3.0, 41)
    seq = []
    ns = (200, 1000, 5000)
    for n in ns:
        eta = n ** -0.15
        setup = ProblemSetup(n=n, k=n - m, eta=eta)
        seq.append((setup, zeta * setup.sigma * setup.xi * eta))
    gaps = weak_convergence_gaps("soft", seq, regime, grid)
    print("Consistent regime: eta_n = n^(-0.15), theta_n = 0.4 sigma xi eta_n.")
    print("Here the scaled error is measured in units of the cutoff itself.")
    print("For the soft kind every survivor is pulled back by one full cutoff,")
    print("so the kept branch collapses onto an atom at -1, while the killed")
    print("branch spreads -zeta/s over (-1, 0) through the variance estimate s:")
    for x in (-1.0001, -1.0, -0.5, -0.2, 0.0):
        print(f"  limit CDF at {x:8.4f}: "
              f"{consistent_limit_cdf('soft', x, regime):.6f}")
    jump = (consistent_limit_cdf("soft", -1.0, regime)
            - consistent_limit_cdf("soft", -1.0 - 1e-12, regime))
    print(f"(the jump {jump:.6f} at -1 is the limiting keep probability)")
    print()
    print("Sup-distance at continuity points along the sequence:")
    for n, g in zip(ns, gaps):
        print(f"  n = {n:5d}: {g:.5f}")
    print()


if __name__ == "__main__":
    conservative_demo()
    consistent_demo()
    print("Both regimes close in on their limits; the conservative one is")
    print("already close at moderate n, the consistent one more slowly.")
