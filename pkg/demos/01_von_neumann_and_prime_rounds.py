"""Von Neumann pairs, and the same idea with p flips per round.

Run: python demos/01_von_neumann_and_prime_rounds.py
"""
from unbiased import RoundOutcome, sample_prime, sample_von_neumann, simulated_source
from unbiased.source import ListSource

# A scripted stream: the first pair HH is thrown away, then TH gives 1.
rep = sample_von_neumann(ListSource("HHTH"))
print("von neumann on HHTH ->", rep.value, "after", rep.flips_consumed, "flips")

# With p = 5, an accepted round returns the sum of Head positions mod 5.
r = RoundOutcome.from_flips([1, 1, 0, 1, 0])
print("round HHTHT: heads =", r.n_head, " rank sum =", r.s_head)
print("sample_prime(5) on HHTHT ->", sample_prime(5, ListSource("HHTHT")).value)

# For p = 2 the two samplers behave identically on any stream.
for seed in range(5):
    a = sample_prime(2, simulated_source(0.8, seed))
    b = sample_von_neumann(simulated_source(0.8, seed))
    print(f"seed {seed}: prime(2) = {a.value} / {a.flips_consumed} flips, "
          f"von neumann = {b.value} / {b.flips_consumed} flips")
