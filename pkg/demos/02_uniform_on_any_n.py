"""Uniform integers on [0, n) from a heavily biased coin.

Each prime factor of n gets its own stage; the stage results are digits
of a mixed-radix number.

Run: python demos/02_uniform_on_any_n.py
"""
from fractions import Fraction

import numpy as np

from unbiased import decompose_value, factorize, sample_uniform, simulated_source
from unbiased.oracle import expected_flips_composite
from unbiased.stats import chi_square_uniform, flip_cost_summary

n, a = 12, 0.15
print(factorize(n), "-> stages", factorize(n).expand_multiset())
print("value 8 is the digit tuple", decompose_value(n, 8))

src = simulated_source(a, seed=2024)
reports = [sample_uniform(n, src) for _ in range(60_000)]
counts = np.bincount([r.value for r in reports], minlength=n)
print("counts:", counts.tolist())

chi = chi_square_uniform(counts)
print(f"chi-square {chi.statistic:.2f} (dof {chi.dof}, 99.9% critical {chi.critical_999:.2f})",
      "-> uniform" if chi.passed else "-> NOT uniform")

cost = flip_cost_summary(reports)
print(f"mean flips {cost.mean:.3f}, theory {float(expected_flips_composite(n, Fraction('0.15'))):.3f}")
print("rejection rate per stage prime:", {p: round(r, 4) for p, r in cost.rejection_rates.items()})
print("a^p + b^p for comparison:      ", {p: round(a**p + (1 - a) ** p, 4) for p in (2, 3)})
