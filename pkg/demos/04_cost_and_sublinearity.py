"""Flip cost: p/(1 - a^p - b^p) per prime stage, and how c(n) grows.

Run: python demos/04_cost_and_sublinearity.py
"""
from fractions import Fraction

import numpy as np

from unbiased.numtheory import cost_c, cost_table, sublinearity_fraction
from unbiased.oracle import SamplerSpec, empirical_dist, expected_flips_composite

for n in (2, 6, 64, 97, 210):
    theory = expected_flips_composite(n, Fraction(1, 2))
    run = empirical_dist(SamplerSpec("uniform", n, 0.5), 20_000, seed=n)
    print(f"n={n:4d}  c(n)={cost_c(n):3d}  expected {float(theory):8.3f}  observed {run.mean_flips:8.3f}")

print("c(2^k) for k = 1..10:", [cost_c(2**k) for k in range(1, 11)])

for N in (10**3, 10**4, 10**5, 10**6):
    frac = sublinearity_fraction(N, 0.5)
    c = cost_table(N)[2:]
    n = np.arange(2, N + 1)
    print(f"N={N:>8}: share with c(n) < n/sqrt(log n) = {float(frac):.4f}, "
          f"mean c(n)/n = {np.mean(c / n):.4f}")
