"""Exact brute-force checks for the samplers.

Everything here is rational arithmetic over ``fractions.Fraction`` and
exhaustive enumeration of the ``2**p`` outcomes of a round.  Enumeration is
done in numpy blocks: the low bits of an outcome index are tabulated once,
and the high bits are walked in a Python loop, so every outcome is visited
exactly once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .numtheory import factorize, is_prime
from .sampler import (
    SamplerConfig,
    decompose_value,
    sample_prime,
    sample_uniform,
    sample_von_neumann,
)
from .source import BiasParams, CountingSource, SimulatedSource

MAX_P = 31
_LOW_BITS = 20

RationalLike = Union[Fraction, int, str]


class BudgetError(ValueError):
    pass


@dataclass(frozen=True)
class ExactDist:
    probs: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if any(q < 0 for q in self.probs):
            raise ValueError("negative probability")
        if sum(self.probs) != 1:
            raise ValueError(f"probabilities sum to {sum(self.probs)}, not 1")

    def __len__(self) -> int:
        return len(self.probs)

    def __getitem__(self, i: int) -> Fraction:
        return self.probs[i]

    def is_uniform(self) -> bool:
        target = Fraction(1, len(self.probs))
        return all(q == target for q in self.probs)


@dataclass(frozen=True)
class PartitionTable:
    """``counts[k-1][m]`` is the number of k-subsets of ``{0..p-1}`` summing to m mod p."""

    p: int
    counts: Tuple[Tuple[int, ...], ...]

    def row(self, k: int) -> Tuple[int, ...]:
        return self.counts[k - 1]


@dataclass(frozen=True)
class LemmaCheck:
    ok: bool
    witness: Optional[Tuple[int, int, int]] = None  # (k, m, count)

    def __bool__(self) -> bool:
        return self.ok


def _as_bias(a: RationalLike) -> Fraction:
    a = Fraction(a)
    if not 0 < a < 1:
        raise ValueError(f"bias must lie strictly inside (0, 1), got {a}")
    return a


def _check_order(p: int, require_prime: bool) -> None:
    if p < 2:
        raise ValueError(f"need p >= 2, got {p}")
    if require_prime and not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p > MAX_P:
        raise BudgetError(f"p={p} exceeds the enumeration budget (p <= {MAX_P})")


def _blocks(p: int, low_bits: int):
    """Yield ``(low, high)`` splits covering all ``2**p`` outcomes.

    ``low`` is a ``(2**L, L)`` uint8 matrix over positions ``0..L-1``;
    ``high`` is one assignment of the remaining positions ``L..p-1``.
    """
    L = min(p, low_bits)
    idx = np.arange(1 << L, dtype=np.uint32)
    low = ((idx[:, None] >> np.arange(L, dtype=np.uint32)) & 1).astype(np.uint8)
    for h in range(1 << (p - L)):
        high = np.array([(h >> j) & 1 for j in range(p - L)], dtype=np.uint8)
        yield low, high


@lru_cache(maxsize=None)
def _partition_counts(p: int) -> Tuple[Tuple[int, ...], ...]:
    grid = np.zeros((p + 1, p), dtype=np.int64)
    low_grid = None
    for low, high in _blocks(p, _LOW_BITS):
        L = low.shape[1]
        if low_grid is None:
            # the low half is the same for every high assignment; tabulate it once
            heads = low.sum(axis=1, dtype=np.int64)
            rank_sum = (low @ np.arange(L, dtype=np.int64)) % p
            low_grid = np.bincount(heads * p + rank_sum, minlength=(L + 1) * p).reshape(L + 1, p)
        hh = int(high.sum())
        hs = int(high @ np.arange(L, p)) % p
        grid[hh:hh + L + 1] += np.roll(low_grid, hs, axis=1)
    return tuple(tuple(int(c) for c in grid[k]) for k in range(1, p))


def enumerate_partition(p: int, require_prime: bool = True) -> PartitionTable:
    """Tabulate ``|S_k^m|`` by visiting every outcome of ``p`` flips.

    ``require_prime=False`` lifts the primality gate (negative controls only).
    """
    _check_order(p, require_prime)
    return PartitionTable(p, _partition_counts(p))


def check_lemma_partition(p: int, require_prime: bool = True) -> LemmaCheck:
    table = enumerate_partition(p, require_prime)
    for k, row in enumerate(table.counts, start=1):
        total = math.comb(p, k)
        for m, count in enumerate(row):
            if count * p != total:
                return LemmaCheck(False, (k, m, count))
    return LemmaCheck(True)


def exact_prime_dist(p: int, a: RationalLike) -> ExactDist:
    """Exact law of ``S_head mod p`` given the round is not all-equal."""
    a = _as_bias(a)
    b = 1 - a
    table = enumerate_partition(p)
    weights = [a**k * b ** (p - k) for k in range(1, p)]
    accept = sum(sum(row) * w for row, w in zip(table.counts, weights))
    probs = tuple(
        sum(row[m] * w for row, w in zip(table.counts, weights)) / accept for m in range(p)
    )
    return ExactDist(probs)


def exact_composite_dist(n: int, a: RationalLike) -> ExactDist:
    """Exact law of ``sample_uniform(n)`` as a product of its stage laws."""
    a = _as_bias(a)
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    stage_laws = [exact_prime_dist(p, a) for p in factorize(n).expand_multiset()]
    probs = []
    for m in range(n):
        q = Fraction(1)
        for law, digit in zip(stage_laws, decompose_value(n, m)):
            q *= law[digit]
        probs.append(q)
    return ExactDist(tuple(probs))


def expected_flips_prime(p: int, a: RationalLike) -> Fraction:
    a = _as_bias(a)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return Fraction(p) / (1 - a**p - (1 - a) ** p)


def expected_flips_composite(n: int, a: RationalLike) -> Fraction:
    """Sum of the per-stage expectations over the factorization of ``n`` (0 for n = 1)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return sum(
        (t * expected_flips_prime(p, a) for p, t in factorize(n).factors), Fraction(0)
    )


@dataclass(frozen=True)
class ResidueCheck:
    rejection_equivalent: bool
    dist: ExactDist

    @property
    def ok(self) -> bool:
        return self.rejection_equivalent and self.dist.is_uniform()


def residue_check(p: int, a: RationalLike) -> ResidueCheck:
    """Recast a round as ``X_i`` in Z_p (Head = 1 with probability ``a``).

    Checks that "all heads or all tails" is the event ``sum X_i = 0`` in Z_p,
    and computes the law of ``sum i * X_i`` in Z_p given ``sum X_i != 0``.
    """
    a = _as_bias(a)
    b = 1 - a
    _check_order(p, require_prime=True)
    # mass[j][r]: outcomes with j ones and weighted residue r, given sum X_i != 0
    mass = np.zeros((p + 1, p), dtype=np.int64)
    equivalent = True
    for low, high in _blocks(p, 16):
        x = np.concatenate([low, np.broadcast_to(high, (low.shape[0], high.size))], axis=1)
        x = x.astype(np.int64)
        total = x.sum(axis=1)
        total_mod = total % p
        weighted_mod = (x @ np.arange(p, dtype=np.int64)) % p
        all_equal = (x == x[:, :1]).all(axis=1)
        equivalent &= bool(np.array_equal(all_equal, total_mod == 0))
        keep = total_mod != 0
        mass += np.bincount(
            total[keep] * p + weighted_mod[keep], minlength=(p + 1) * p
        ).reshape(p + 1, p)
    weight = [a**j * b ** (p - j) for j in range(p + 1)]
    cells = [sum(int(mass[j, r]) * weight[j] for j in range(p + 1)) for r in range(p)]
    norm = sum(cells)
    return ResidueCheck(equivalent, ExactDist(tuple(c / norm for c in cells)))


def check_residue_equivalence(p: int, a: RationalLike) -> bool:
    return residue_check(p, a).ok


@dataclass(frozen=True)
class SamplerSpec:
    """What to sample: ``kind`` is "uniform", "prime" or "von_neumann"."""

    kind: str
    n: int
    a: float

    def support(self) -> int:
        return 2 if self.kind == "von_neumann" else self.n


@dataclass
class EmpiricalRun:
    counts: np.ndarray
    mean_flips: Optional[float]
    reports: list


def empirical_dist(
    spec: SamplerSpec,
    trials: int,
    seed: int,
    cfg: SamplerConfig = SamplerConfig(),
    keep_reports: bool = False,
) -> EmpiricalRun:
    """Monte-Carlo counterpart of the exact laws, from one seeded source."""
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    src = CountingSource(SimulatedSource(BiasParams(spec.a), seed))
    if spec.kind == "uniform":
        draw = lambda: sample_uniform(spec.n, src, cfg)  # noqa: E731
    elif spec.kind == "prime":
        draw = lambda: sample_prime(spec.n, src, cfg)  # noqa: E731
    elif spec.kind == "von_neumann":
        draw = lambda: sample_von_neumann(src, cfg)  # noqa: E731
    else:
        raise ValueError(f"unknown sampler kind {spec.kind!r}")
    counts = np.zeros(spec.support(), dtype=np.int64)
    reports = []
    for _ in range(trials):
        rep = draw()
        counts[rep.value] += 1
        if keep_reports:
            reports.append(rep)
    mean = src.flips_consumed / trials if trials else None
    return EmpiricalRun(counts, mean, reports)


def negative_control_rows(candidates: Sequence[int]) -> dict:
    """First failing Lemma row for each composite order (primality gate bypassed)."""
    out = {}
    for n in candidates:
        if not is_prime(n):
            out[n] = check_lemma_partition(n, require_prime=False).witness
    return out
