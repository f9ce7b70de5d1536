import itertools
from fractions import Fraction

import pytest


def brute_round_law(p, a):
    """Law of the rank sum mod p over accepted rounds, straight from all 2**p flip tuples."""
    a = Fraction(a)
    b = 1 - a
    mass = [Fraction(0)] * p
    for flips in itertools.product((0, 1), repeat=p):
        heads = sum(flips)
        if heads in (0, p):
            continue
        mass[sum(i for i, f in enumerate(flips) if f) % p] += a**heads * b ** (p - heads)
    total = sum(mass)
    return [m / total for m in mass]


def brute_partition(n):
    """counts[k-1][m] from itertools.combinations (works for any n >= 2)."""
    rows = []
    for k in range(1, n):
        row = [0] * n
        for subset in itertools.combinations(range(n), k):
            row[sum(subset) % n] += 1
        rows.append(row)
    return rows


@pytest.fixture
def bit_file(tmp_path):
    from unbiased.source import write_bit_file

    def make(flips, name="flips.bin"):
        path = tmp_path / name
        write_bit_file(path, flips)
        return path

    return make


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
