"""Exact rational checks by enumerating every outcome of a round.

Run: python demos/03_exact_oracle.py
"""
from fractions import Fraction

from unbiased.oracle import (
    check_lemma_partition,
    enumerate_partition,
    exact_composite_dist,
    exact_prime_dist,
    residue_check,
)

# k-subsets of {0..6} of size 3, split by element sum mod 7: 35 subsets, 5 per class
print("p=7, k=3:", enumerate_partition(7).row(3))

# Same table for the composite 4: no equal split, which is why primes are required
print("n=4 (gate bypassed), k=2:", enumerate_partition(4, require_prime=False).row(2))
print("lemma witness for 4:", check_lemma_partition(4, require_prime=False).witness)

a = Fraction(1, 10)
print("law of the p=7 sampler at a=1/10:", exact_prime_dist(7, a).probs)
print("law of the n=30 sampler at a=1/10 is uniform:", exact_composite_dist(30, a).is_uniform())

res = residue_check(11, Fraction(2, 3))
print("Z_11 view: rejection <=> sum X_i = 0:", res.rejection_equivalent,
      "| conditional law uniform:", res.dist.is_uniform())
