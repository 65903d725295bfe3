"""Exact Laplace spectrum of the flat torus link of the Harvey-Lawson cone.

Eigenfunctions on the link of ``C^m_HL`` are indexed by integer vectors
``n = (n_1, ..., n_{m-1})`` with eigenvalue

    Q_m(n) = m * sum(n_i^2) - (sum(n_i))^2

Lattice vectors are enumerated depth first.  A partial vector with ``k``
fixed coordinates, square sum ``A`` and coordinate sum ``s`` is pruned when

    m * ((k+1) * A - s^2) > lambda_max * (k+1)

which is the exact minimum of ``Q_m`` over all real completions, so no
vector with ``Q_m(n) <= lambda_max`` is ever lost.  The bound is far tighter
than ``sum(n_i^2) <= lambda_max``, which keeps m up to 14 cheap.
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from .errors import ResourceLimitError
from .spectrum import LinkSpectrum

__all__ = [
    "DEFAULT_MAX_POINTS",
    "LatticeVector",
    "hl_eigenvalue",
    "hl_spectrum",
    "hl_eigenvectors",
    "hl_multiplicities",
]

log = logging.getLogger(__name__)

DEFAULT_MAX_POINTS = 10**9

LatticeVector = tuple[int, ...]


def _check_m(m: int) -> None:
    if isinstance(m, bool) or not isinstance(m, int):
        raise TypeError(f"m must be an integer, got {m!r}")
    if m < 3:
        raise ValueError(f"m must be >= 3, got {m}")


def hl_eigenvalue(m: int, n: Sequence[int]) -> int:
    """Eigenvalue of the link Laplacian attached to the lattice vector ``n``.

    >>> hl_eigenvalue(3, (1, -1))
    6
    """
    _check_m(m)
    if len(n) != m - 1:
        raise ValueError(
            f"lattice vector for m={m} needs {m - 1} coordinates, got {len(n)}"
        )
    n = [int(x) for x in n]
    s = sum(n)
    return m * sum(x * x for x in n) - s * s


def _coordinate_range(m: int, lam_max: int, k: int, a_sq: int, s: int) -> range:
    # Candidates y for coordinate k given k fixed coordinates; may overshoot
    # by one on each side, callers re-check the exact condition.
    a = m * (k + 1)
    b = -2 * m * s
    c = m * ((k + 2) * a_sq - s * s) - lam_max * (k + 2)
    disc = b * b - 4 * a * c
    if disc < 0:
        return range(0)
    r = isqrt(disc)
    lo = (-b - r - 1) // (2 * a)
    hi = -((b - r - 1) // (2 * a))
    return range(lo, hi + 1)


def _walk(
    m: int,
    lam_max: int,
    first_values: Iterable[int],
    max_points: int,
    collect: int | None = None,
) -> tuple[Counter, list[LatticeVector], int]:
    dim = m - 1
    counts: Counter = Counter()
    found: list[LatticeVector] = []
    coords = [0] * dim
    visited = 0

    def descend(k: int, a_sq: int, s: int, values: Iterable[int]) -> None:
        nonlocal visited
        kk = k + 2
        limit = lam_max * kk
        for y in values:
            a2 = a_sq + y * y
            s2 = s + y
            if m * (kk * a2 - s2 * s2) > limit:
                continue
            visited += 1
            if visited > max_points:
                raise ResourceLimitError(
                    f"lattice enumeration for m={m}, lambda_max={lam_max} "
                    f"exceeded the cap of {max_points} points"
                )
            coords[k] = y
            if k + 1 == dim:
                q = m * a2 - s2 * s2
                counts[q] += 1
                if collect is not None and q == collect:
                    found.append(tuple(coords))
            else:
                descend(k + 1, a2, s2, _coordinate_range(m, lam_max, k + 1, a2, s2))

    descend(0, 0, 0, first_values)
    return counts, found, visited


def _walk_task(args):
    return _walk(*args)


def _partition(values: list[int], parts: int) -> list[list[int]]:
    chunks = [values[i::parts] for i in range(parts)]
    return [c for c in chunks if c]


def _run(
    m: int,
    lam_max: int,
    threads: int,
    max_points: int,
    collect: int | None = None,
) -> tuple[Counter, list[LatticeVector]]:
    _check_m(m)
    if isinstance(lam_max, bool) or not isinstance(lam_max, int):
        raise TypeError(f"lambda_max must be an integer, got {lam_max!r}")
    if lam_max < 0:
        raise ValueError(f"lambda_max must be nonnegative, got {lam_max}")
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    firsts = list(_coordinate_range(m, lam_max, 0, 0, 0))
    if threads == 1 or len(firsts) < 2:
        counts, found, visited = _walk(m, lam_max, firsts, max_points, collect)
    else:
        tasks = [
            (m, lam_max, chunk, max_points, collect)
            for chunk in _partition(firsts, threads)
        ]
        counts, found, visited = Counter(), [], 0
        with ProcessPoolExecutor(max_workers=len(tasks)) as pool:
            for c, f, v in pool.map(_walk_task, tasks):
                counts.update(c)
                found.extend(f)
                visited += v
        if visited > max_points:
            raise ResourceLimitError(
                f"lattice enumeration for m={m}, lambda_max={lam_max} "
                f"exceeded the cap of {max_points} points"
            )
    log.debug("m=%d lambda_max=%d: visited %d partial vectors", m, lam_max, visited)
    return counts, found


def hl_multiplicities(
    m: int,
    lambda_max: int,
    *,
    threads: int = 1,
    max_points: int = DEFAULT_MAX_POINTS,
) -> dict[int, int]:
    """Map each eigenvalue ``<= lambda_max`` to its multiplicity, sorted by eigenvalue."""
    counts, _ = _run(m, lambda_max, threads, max_points)
    return {lam: counts[lam] for lam in sorted(counts)}


def hl_spectrum(
    m: int,
    lambda_max: int,
    *,
    threads: int = 1,
    max_points: int = DEFAULT_MAX_POINTS,
) -> LinkSpectrum:
    """Spectrum of the Harvey-Lawson link, complete up to ``lambda_max``.

    ``threads`` is the number of worker processes; the result does not
    depend on it.
    """
    mults = hl_multiplicities(m, lambda_max, threads=threads, max_points=max_points)
    return LinkSpectrum(
        m=m,
        entries=tuple((Fraction(lam), mult) for lam, mult in mults.items()),
        complete_up_to=Fraction(lambda_max),
    )


def hl_eigenvectors(
    m: int,
    lam: int,
    *,
    threads: int = 1,
    max_points: int = DEFAULT_MAX_POINTS,
) -> list[LatticeVector]:
    """All lattice vectors with eigenvalue exactly ``lam``, in lexicographic order."""
    _, found = _run(m, lam, threads, max_points, collect=lam)
    return sorted(found)
