"""Primality, factorization into the prime multiset, and the cost c(n)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

import numpy as np

U64_MAX = (1 << 64) - 1
TRIAL_LIMIT = 10**6

# Strong-probable-prime bases that are deterministic below 3.18e23, so for all 64-bit n.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _sieve(limit: int) -> np.ndarray:
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if is_p[i]:
            is_p[i * i::i] = False
    return np.flatnonzero(is_p)


@lru_cache(maxsize=1)
def _trial_primes() -> Tuple[int, ...]:
    return tuple(int(p) for p in _sieve(TRIAL_LIMIT))


def is_prime(n: int) -> bool:
    if n > U64_MAX:
        raise ValueError(f"{n} does not fit in 64 bits")
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < 41 * 41:
        return True
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite ``n``."""
    for c in range(1, n):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"Pollard rho failed on {n}")


def _split(n: int, out: List[int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out.append(n)
        return
    d = _pollard_brent(n)
    _split(d, out)
    _split(n // d, out)


@dataclass(frozen=True)
class PrimeFactorization:
    """``n`` as a list of ``(prime, multiplicity)`` pairs, primes increasing."""

    n: int
    factors: Tuple[Tuple[int, int], ...]

    def expand_multiset(self) -> List[int]:
        """The prime multiset, nondecreasing, each prime repeated by multiplicity."""
        return [p for p, t in self.factors for _ in range(t)]

    def product(self) -> int:
        return math.prod(p**t for p, t in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return f"{self.n} = (empty product)"
        terms = [f"{p}^{t}" if t > 1 else str(p) for p, t in self.factors]
        return f"{self.n} = " + " * ".join(terms)


def _check_u64(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise TypeError(f"expected an integer, got {type(n).__name__}")
    if n > U64_MAX:
        raise ValueError(f"{n} does not fit in 64 bits")


@lru_cache(maxsize=4096)
def factorize(n: int) -> PrimeFactorization:
    _check_u64(n)
    n = int(n)
    if n < 1:
        raise ValueError(f"cannot factorize {n}; need n >= 1")
    rest = n
    found: List[int] = []
    for p in _trial_primes():
        if p * p > rest:
            break
        while rest % p == 0:
            found.append(p)
            rest //= p
    if rest > 1:
        _split(rest, found)
    found.sort()
    factors: List[Tuple[int, int]] = []
    for p in found:
        if factors and factors[-1][0] == p:
            factors[-1] = (p, factors[-1][1] + 1)
        else:
            factors.append((p, 1))
    return PrimeFactorization(n, tuple(factors))


def cost_c(n: int) -> int:
    """Sum of the prime factors of ``n`` counted with multiplicity."""
    if n < 2:
        raise ValueError(f"c(n) is defined for n >= 2, got {n}")
    return sum(p * t for p, t in factorize(n).factors)


def cost_table(N: int) -> np.ndarray:
    """``c(n)`` for every ``0 <= n <= N`` (entries 0 and 1 are 0), by sieving.

    Each prime power ``p^k <= N`` adds ``p`` to all its multiples, which
    sums ``t * p`` over the factorization of every n at once.
    """
    c = np.zeros(N + 1, dtype=np.int64)
    if N < 2:
        return c
    for p in _sieve(N).tolist():
        q = p
        while q <= N:
            c[q::q] += p
            q *= p
    return c


def sublinearity_fraction(N: int, epsilon: float) -> Fraction:
    """Share of ``2 <= n <= N`` with ``c(n) < n / log(n)**(1 - epsilon)``."""
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    n = np.arange(2, N + 1, dtype=np.float64)
    threshold = n / np.log(n) ** (1.0 - epsilon)
    hits = int(np.count_nonzero(cost_table(N)[2:] < threshold))
    return Fraction(hits, N - 1)
