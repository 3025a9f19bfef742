"""
Partitions, interlacing relations and counting measures.

A partition is stored as a plain tuple of positive integers in weakly
decreasing order; trailing zeros are stripped on construction so that two
partitions compare equal exactly when their Young diagrams agree. Tuples
are hashable, which lets them key the Fock-space dictionaries of
:mod:`railyard.fock` directly.

Interlacing follows the convention ``λ ≻ μ`` iff
``λ_1 ≥ μ_1 ≥ λ_2 ≥ μ_2 ≥ ...`` (``λ/μ`` is a horizontal strip); the
primed relation ``≻′`` is the same test applied to conjugates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Tuple

import numpy as np

Partition = Tuple[int, ...]

EMPTY: Partition = ()


def make_partition(parts: Iterable[int]) -> Partition:
    """Validate ``parts`` and return the normalised partition tuple."""
    values = [int(p) for p in parts]
    for prev, cur in zip(values, values[1:]):
        if cur > prev:
            raise ValueError(f"partition parts must be weakly decreasing, got {values}")
    if values and values[-1] < 0:
        raise ValueError(f"partition parts must be nonnegative, got {values}")
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


def size(lam: Partition) -> int:
    return sum(lam)


def length(lam: Partition) -> int:
    return len(lam)


def part(lam: Partition, i: int) -> int:
    """``λ_i`` with 1-based index and implicit zero padding."""
    return lam[i - 1] if 1 <= i <= len(lam) else 0


def conjugate(lam: Partition) -> Partition:
    """Transpose of the Young diagram: ``λ'_i = |{j : λ_j ≥ i}|``."""
    if not lam:
        return EMPTY
    out = []
    j = len(lam)
    for i in range(1, lam[0] + 1):
        while j > 0 and lam[j - 1] < i:
            j -= 1
        out.append(j)
    return tuple(out)


def interlaces(lam: Partition, mu: Partition, conjugated: bool = False) -> bool:
    """True iff ``λ ≻ μ`` (or ``λ ≻′ μ`` when ``conjugated``)."""
    if conjugated:
        lam, mu = conjugate(lam), conjugate(mu)
    n = max(len(lam), len(mu))
    for i in range(1, n + 1):
        if not part(lam, i) >= part(mu, i) >= part(lam, i + 1):
            return False
    return True


# -----------------------------------------------------------------------------
# Strip enumeration
# -----------------------------------------------------------------------------


def strips_below(lam: Partition) -> Iterator[Partition]:
    """All ``μ`` with ``μ ≺ λ``, i.e. ``μ_i ∈ [λ_{i+1}, λ_i]``."""
    n = len(lam)
    if n == 0:
        yield EMPTY
        return
    bounds = [(part(lam, i + 1), lam[i - 1]) for i in range(1, n + 1)]

    def rec(i: int, acc: list) -> Iterator[Partition]:
        if i == n:
            yield make_partition(acc)
            return
        lo, hi = bounds[i]
        for v in range(lo, hi + 1):
            acc.append(v)
            yield from rec(i + 1, acc)
            acc.pop()

    yield from rec(0, [])


def strips_above(lam: Partition, cap: int) -> Iterator[Partition]:
    """All ``μ`` with ``μ ≻ λ`` and ``|μ| ≤ cap``.

    ``μ_1 ≥ λ_1`` is unbounded apart from the size cap; the remaining rows
    satisfy ``μ_i ∈ [λ_i, λ_{i-1}]`` so that ``l(μ) ≤ l(λ) + 1``.
    """
    room = cap - size(lam)
    if room < 0:
        return
    n = len(lam)

    def rec(i: int, acc: list, left: int) -> Iterator[Partition]:
        # rows are 1-based; row n + 1 is the only possible new row
        if i > n + 1:
            yield make_partition(acc)
            return
        lo = part(lam, i)
        hi = lo + left if i == 1 else min(part(lam, i - 1), lo + left)
        for v in range(lo, hi + 1):
            acc.append(v)
            yield from rec(i + 1, acc, left - (v - lo))
            acc.pop()

    yield from rec(1, [], room)


def vertical_strips_below(lam: Partition) -> Iterator[Partition]:
    """All ``μ`` with ``μ ≺′ λ``."""
    for mu in strips_below(conjugate(lam)):
        yield conjugate(mu)


def vertical_strips_above(lam: Partition, cap: int) -> Iterator[Partition]:
    """All ``μ`` with ``μ ≻′ λ`` and ``|μ| ≤ cap``."""
    for mu in strips_above(conjugate(lam), cap):
        yield conjugate(mu)


def partitions_up_to(n: int) -> Iterator[Partition]:
    """Every partition of size at most ``n`` (small ``n`` only)."""
    for k in range(n + 1):
        yield from partitions_of(k)


def partitions_of(n: int, largest: int | None = None) -> Iterator[Partition]:
    if largest is None:
        largest = n
    if n == 0:
        yield EMPTY
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions_of(n - first, first):
            yield (first,) + rest


# -----------------------------------------------------------------------------
# Counting measure
# -----------------------------------------------------------------------------


@dataclass(frozen=True)
class CountingMeasure:
    """Empirical measure with atoms ``(λ_i + N - i)/N`` of mass ``1/N``."""

    atoms: np.ndarray
    N: int

    @property
    def mass(self) -> float:
        return len(self.atoms) / self.N

    def moment(self, k: int) -> float:
        return float(np.sum(self.atoms**k) / self.N)


def counting_measure(lam: Partition, N: int) -> CountingMeasure:
    if N <= 0:
        raise ValueError(f"N must be positive, got {N}")
    if len(lam) > N:
        raise ValueError(f"partition of length {len(lam)} does not fit N={N}")
    i = np.arange(1, N + 1)
    rows = np.array([part(lam, k) for k in i], dtype=float)
    return CountingMeasure(atoms=(rows + N - i) / N, N=N)
