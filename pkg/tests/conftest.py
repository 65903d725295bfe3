from collections import Counter
from itertools import product
from math import isqrt

import pytest

from slcone.spectrum import ConeDescriptor


def brute_spectrum(m, lam_max):
    """Oracle: every n in a box with sum(n_i^2) <= lam_max, eigenvalue by the raw formula."""
    r = isqrt(lam_max)
    counts = Counter()
    for n in product(range(-r, r + 1), repeat=m - 1):
        if sum(x * x for x in n) > lam_max:
            continue
        q = m * sum(x * x for x in n) - sum(n) ** 2
        if q <= lam_max:
            counts[q] += 1
    return dict(sorted(counts.items()))


@pytest.fixture(scope="session")
def hl():
    cache = {}

    def make(m):
        if m not in cache:
            cache[m] = ConeDescriptor.harvey_lawson(m)
        return cache[m]

    return make


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
