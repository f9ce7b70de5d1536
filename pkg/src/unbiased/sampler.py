"""Uniform sampling from a biased coin.

Three samplers share one flip-accounting scheme:

* ``sample_von_neumann`` - pairs of flips, HT -> 0, TH -> 1, others discarded.
* ``sample_prime`` - rounds of ``p`` flips; an all-equal round is discarded,
  otherwise the result is the sum of Head positions modulo ``p``.
* ``sample_uniform`` - one ``sample_prime`` stage per prime factor of ``n``
  (nondecreasing, with repeats), composed as mixed-radix digits.

Every round consumes its full block of flips even when rejection could be
decided early, so the flip count of a draw is always
``sum((rejected + 1) * p)`` over its stages.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .numtheory import U64_MAX, factorize, is_prime
from .source import BitSource, Flip, SourceExhausted


@dataclass(frozen=True)
class RoundOutcome:
    flips: Tuple[Flip, ...]
    n_head: int
    s_head: int
    rejected: bool

    @classmethod
    def from_flips(cls, flips: Sequence[int]) -> "RoundOutcome":
        bits = tuple(Flip(int(f)) for f in flips)
        n_head = sum(bits)
        s_head = sum(i for i, f in enumerate(bits) if f)
        return cls(bits, n_head, s_head, n_head in (0, len(bits)))


@dataclass(frozen=True)
class StageTelemetry:
    prime: int
    rejected_rounds: int
    accepted_round_flips: Tuple[Flip, ...]

    @property
    def flips(self) -> int:
        return (self.rejected_rounds + 1) * self.prime


@dataclass(frozen=True)
class SampleReport:
    value: int
    flips_consumed: int
    rounds: Tuple[StageTelemetry, ...] = ()


@dataclass(frozen=True)
class SamplerConfig:
    """``max_rounds_per_stage=None`` leaves the rejection loop unbounded."""

    max_rounds_per_stage: Optional[int] = None
    factor_order: str = field(default="nondecreasing")

    def __post_init__(self) -> None:
        if self.max_rounds_per_stage is not None and self.max_rounds_per_stage < 1:
            raise ValueError("max_rounds_per_stage must be a positive integer")
        if self.factor_order != "nondecreasing":
            raise ValueError("only nondecreasing factor order is supported")


class SamplingError(RuntimeError):
    """Base for sampler failures; carries the telemetry gathered so far."""

    def __init__(self, message: str, flips_consumed: int, stages: Sequence[StageTelemetry] = ()):
        super().__init__(message)
        self.flips_consumed = flips_consumed
        self.stages = tuple(stages)

    def _prefixed(self, done: Sequence[StageTelemetry]) -> "SamplingError":
        return type(self)(
            str(self),
            self.flips_consumed + sum(s.flips for s in done),
            tuple(done) + self.stages,
        )


class SourceExhaustedError(SamplingError):
    pass


class RoundCapExceeded(SamplingError):
    pass


def _run_stage(p: int, src: BitSource, cap: Optional[int], pair_mode: bool = False) -> Tuple[int, StageTelemetry]:
    ranks = _ranks(p)
    rejected = 0
    while True:
        if cap is not None and rejected >= cap:
            raise RoundCapExceeded(
                f"prime {p}: {rejected} consecutive rejected rounds (cap {cap})",
                rejected * p,
            )
        try:
            block = src.read(p)
        except SourceExhausted as exc:
            raise SourceExhaustedError(
                f"source exhausted during a round of {p} flips",
                rejected * p + exc.partial,
            ) from None
        if pair_mode:
            if block[0] != block[1]:
                value = 0 if block[0] == Flip.HEAD else 1
                break
        else:
            heads = int(block.sum())
            if 0 < heads < p:
                value = int(ranks @ block) % p
                break
        rejected += 1
    accepted = tuple(Flip(int(f)) for f in block)
    return value, StageTelemetry(p, rejected, accepted)


_RANKS: dict = {}


def _ranks(p: int) -> np.ndarray:
    r = _RANKS.get(p)
    if r is None:
        r = _RANKS[p] = np.arange(p, dtype=np.int64)
    return r


def sample_von_neumann(src: BitSource, cfg: SamplerConfig = SamplerConfig()) -> SampleReport:
    """Fair bit from flip pairs: HT gives 0, TH gives 1, HH/TT are discarded."""
    value, stage = _run_stage(2, src, cfg.max_rounds_per_stage, pair_mode=True)
    return SampleReport(value, stage.flips, (stage,))


def sample_prime(p: int, src: BitSource, cfg: SamplerConfig = SamplerConfig()) -> SampleReport:
    if p < 2 or not is_prime(p):
        raise ValueError(f"sample_prime needs a prime, got {p}")
    value, stage = _run_stage(p, src, cfg.max_rounds_per_stage)
    return SampleReport(value, stage.flips, (stage,))


def _fold(n, primes: Sequence[int], digits):
    remaining, r = n, 0
    for p, t in zip(primes, digits):
        remaining //= p
        r = r + t * remaining
    return r


def compose_digits(n: int, digits: Sequence):
    """Fold stage digits into a value in ``[0, n)`` the way ``sample_uniform`` does.

    Digits may be ints or equally shaped integer arrays.
    """
    primes = factorize(n).expand_multiset()
    if len(digits) != len(primes):
        raise ValueError(f"{n} has {len(primes)} prime stages, got {len(digits)} digits")
    for p, t in zip(primes, digits):
        if np.any(t < 0) or np.any(t >= p):
            raise ValueError(f"digit {t} out of range for prime {p}")
    return _fold(n, primes, digits)


def decompose_value(n: int, m) -> Tuple:
    """Inverse of ``compose_digits``: the unique stage digits that produce ``m``.

    ``m`` may be an int or an integer array (digits are then arrays too).
    """
    if np.any(m < 0) or np.any(m >= n):
        raise ValueError(f"value {m} outside [0, {n})")
    primes = factorize(n).expand_multiset()
    digits = []
    for p in reversed(primes):
        m, d = divmod(m, p)
        digits.append(d)
    return tuple(reversed(digits))


def sample_uniform(n: int, src: BitSource, cfg: SamplerConfig = SamplerConfig()) -> SampleReport:
    """Uniform value on ``[0, n)`` from one prime stage per factor of ``n``."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"n must be an integer, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > U64_MAX:
        raise ValueError(f"n={n} does not fit in 64 bits")
    primes = factorize(int(n)).expand_multiset()
    digits: List[int] = []
    stages: List[StageTelemetry] = []
    for p in primes:
        try:
            t, stage = _run_stage(p, src, cfg.max_rounds_per_stage)
        except SamplingError as exc:
            raise exc._prefixed(stages) from None
        digits.append(t)
        stages.append(stage)
    value = _fold(int(n), primes, digits)
    return SampleReport(value, sum(s.flips for s in stages), tuple(stages))


def biased_control(report: SampleReport, n: int) -> SampleReport:
    """Deliberately skewed sampler output (``min(value, n - 2)``) for negative controls."""
    return replace(report, value=min(report.value, n - 2))
