"""Goodness-of-fit and flip-cost summaries for empirical runs."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Sequence

from .sampler import SampleReport

_Z_999 = 3.090232306167813  # standard normal 0.999 quantile

# 0.999 quantiles for small dof, where Wilson-Hilferty is off by up to ~2%
_CRIT_999_SMALL = {
    1: 10.827566170662733,
    2: 13.815510557964274,
    3: 16.26623619623813,
    4: 18.46682695290317,
    5: 20.515005652432873,
    6: 22.457744484825323,
    7: 24.321886347856854,
    8: 26.12448155837614,
    9: 27.877164871256568,
    10: 29.58829844507442,
    11: 31.264133620239985,
    12: 32.90949040736021,
    13: 34.52817897487089,
    14: 36.12327368039813,
    15: 37.69729821835383,
    16: 39.252354790768464,
    17: 40.79021670690253,
    18: 42.31239633167996,
    19: 43.82019596451753,
    20: 45.31474661812586,
    21: 46.797038041561315,
    22: 48.26794229083518,
    23: 49.7282324664315,
    24: 51.17859777737739,
    25: 52.619655776172834,
    26: 54.05196238857664,
    27: 55.47602020574521,
    28: 56.892285393353625,
    29: 58.301173489794905,
    30: 59.70306430442994,
}


def chi2_critical_999(dof: int) -> float:
    """0.999 quantile of the chi-square law with ``dof`` degrees of freedom."""
    if dof < 1:
        raise ValueError(f"dof must be positive, got {dof}")
    if dof in _CRIT_999_SMALL:
        return _CRIT_999_SMALL[dof]
    h = 2.0 / (9.0 * dof)
    return dof * (1.0 - h + _Z_999 * math.sqrt(h)) ** 3


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    critical_999: float
    passed: bool

    @property
    def pass_(self) -> bool:
        return self.passed


def chi_square_uniform(counts: Sequence[int]) -> ChiSquareResult:
    """Pearson test of ``counts`` against the uniform law on its buckets."""
    counts = [int(c) for c in counts]
    if len(counts) < 2:
        raise ValueError("need at least 2 buckets")
    if any(c < 0 for c in counts):
        raise ValueError("counts must be nonnegative")
    total = sum(counts)
    if total == 0:
        raise ValueError("no observations")
    expected = total / len(counts)
    if expected < 5:
        raise ValueError(
            f"expected count per bucket is {expected:.3g} < 5 "
            f"(every bucket 0..{len(counts) - 1} is under-sampled)"
        )
    stat = sum((c - expected) ** 2 for c in counts) / expected
    dof = len(counts) - 1
    crit = chi2_critical_999(dof)
    return ChiSquareResult(stat, dof, crit, stat < crit)


@dataclass(frozen=True)
class CostSummary:
    mean: float
    variance: float
    min: int
    max: int
    rejection_rates: Dict[int, float]


def flip_cost_summary(reports: Sequence[SampleReport]) -> CostSummary:
    """Moments of flips per draw and the rejected-round share of each prime stage.

    Variance is the population variance, so a single report gives 0.
    """
    if not reports:
        raise ValueError("no reports to summarize")
    flips = [r.flips_consumed for r in reports]
    mean = sum(flips) / len(flips)
    var = sum((f - mean) ** 2 for f in flips) / len(flips)
    rejected: Dict[int, int] = defaultdict(int)
    rounds: Dict[int, int] = defaultdict(int)
    for r in reports:
        for stage in r.rounds:
            rejected[stage.prime] += stage.rejected_rounds
            rounds[stage.prime] += stage.rejected_rounds + 1
    rates = {p: rejected[p] / rounds[p] for p in sorted(rounds)}
    return CostSummary(mean, var, min(flips), max(flips), rates)
